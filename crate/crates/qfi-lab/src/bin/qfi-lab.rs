fn main() -> ! {
    qfi_lab::cli::main()
}
