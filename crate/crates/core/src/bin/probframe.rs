fn main() {
    probframe::cli::main_exit()
}
