fn main() {
    println!("hyperlace CLI placeholder");
}
