//! Command-line entry point. Placeholder while subsystems land.

pub fn run() -> i32 {
    eprintln!("autopose: not wired yet");
    1
}
