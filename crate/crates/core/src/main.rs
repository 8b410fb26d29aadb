fn main() {
    std::process::exit(borwein_lab_core::cli::run());
}
