use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

fn main() {
    let interrupt = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&interrupt);
    // a second Ctrl-C exits without waiting for running tasks
    let _ = ctrlc::set_handler(move || {
        if flag.swap(true, Ordering::SeqCst) {
            std::process::exit(2);
        }
    });
    let code = ffr_cli::run(std::env::args().collect(), &interrupt);
    std::process::exit(code);
}
