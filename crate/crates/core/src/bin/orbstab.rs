use clap::Parser;

fn main() -> std::process::ExitCode {
    let code = orbstab::cli::run(orbstab::cli::Cli::parse());
    std::process::ExitCode::from(code as u8)
}
