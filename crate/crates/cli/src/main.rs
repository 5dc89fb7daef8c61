use clap::Parser;

fn main() {
    let cli = tropical_cli::Cli::parse();
    std::process::exit(tropical_cli::execute(&cli));
}
