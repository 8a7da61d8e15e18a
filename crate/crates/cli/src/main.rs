fn main() {
    gaslayer_cli::run();
}
