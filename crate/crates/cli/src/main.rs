use clap::Parser;

fn main() {
    let cli = legreal_cli::Cli::parse();
    let code = legreal_cli::run(cli, &mut std::io::stdout());
    std::process::exit(code);
}
