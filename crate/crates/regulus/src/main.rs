use clap::Parser;

fn main() {
    let cli = regulus::cli::Cli::parse();
    std::process::exit(regulus::cli::run(cli));
}
