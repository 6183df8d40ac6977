//! Reference runner executable: serves the wire protocol on stdin/stdout,
//! answering vector sets with the reference crypto implementations.
//!
//! Flags:
//!   --coverage            emit a coverage frame after every response
//!   --timeout-self-test   hang forever on the first vector-set request

use std::io::BufReader;

use acvp_kit::runner::{serve, RunnerConfig};

fn main() {
    let mut config = RunnerConfig { coverage: false, timeout_self_test: false };
    for arg in std::env::args().skip(1) {
        match arg.as_str() {
            "--coverage" => config.coverage = true,
            "--timeout-self-test" => config.timeout_self_test = true,
            other => {
                eprintln!("unknown flag: {other}");
                std::process::exit(2);
            }
        }
    }
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    if let Err(e) = serve(BufReader::new(stdin.lock()), stdout.lock(), &config) {
        eprintln!("io error: {e}");
        std::process::exit(1);
    }
}
