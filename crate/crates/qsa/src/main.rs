use std::process::ExitCode;

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("QSA_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .expect("rayon pool not yet initialized");
            }
            _ => {
                eprintln!("error: QSA_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    ExitCode::from(qsa::cli::main_entry() as u8)
}
