//! C ABI placeholder; filled in once the core surface is complete.
