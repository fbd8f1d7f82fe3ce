use clap::Parser;

use dynperm::cli::{exit_code, run, RunConfig, EXIT_INPUT};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(&cfg) {
        eprintln!("dynperm: {e}");
        std::process::exit(exit_code(&e));
    }
}
