use std::hint::black_box;
use std::time::Instant;

/// Runs `kernel` once and returns the elapsed monotonic time in seconds.
///
/// The timed region ends when the kernel returns. Its output is passed
/// through [`black_box`] so the call cannot be optimized away, and is
/// dropped after the clock is read.
pub fn time_once<T>(kernel: impl FnOnce() -> T) -> f64 {
    time_with_output(kernel).0
}

/// Like [`time_once`] but hands the kernel output back to the caller.
pub fn time_with_output<T>(kernel: impl FnOnce() -> T) -> (f64, T) {
    let start = Instant::now();
    let out = black_box(kernel());
    let elapsed = start.elapsed();
    (elapsed.as_secs_f64(), out)
}
