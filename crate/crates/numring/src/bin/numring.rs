fn main() {
    numring::cli::main();
}
