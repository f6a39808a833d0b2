use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SLOPEFLOW_LOG", "warn"))
        .format_timestamp(None)
        .init();
    slopeflow::cli::run_cli(std::env::args_os())
}
