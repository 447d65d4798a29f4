pub fn main() {
    todo!()
}
