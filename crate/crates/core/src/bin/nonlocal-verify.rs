fn main() {
    let code = nonlocal_diffusion::cli::cli_main(std::env::args_os());
    std::process::exit(code);
}
