fn main() {
    println!("singleshot");
}
