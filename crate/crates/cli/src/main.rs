use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use ofi_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();

    #[cfg(feature = "parallel")]
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: cannot start worker pool: {err}");
            return ExitCode::from(2);
        }
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = ofi_cli::run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
