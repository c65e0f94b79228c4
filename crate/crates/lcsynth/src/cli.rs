//! Batch front door: parse code/target files, run synthesis and checkers.

/// Run the CLI with the given arguments, returning the process exit code.
pub fn run(_args: Vec<String>) -> i32 {
    2
}
