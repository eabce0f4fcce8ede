//! Scoped-thread fan-out for embarrassingly parallel index ranges.
//!
//! Work items are pure functions of their index, so results never depend on
//! how the range is chunked. The worker count defaults to the available
//! cores, capped by the `QFI_LAB_THREADS` environment variable.

/// Worker count from `QFI_LAB_THREADS`, defaulting to all cores.
pub fn worker_count_from_env() -> usize {
    let cores = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("QFI_LAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => cores,
        },
        Err(_) => cores,
    }
}

/// Maps `f` over `0..len` with `workers` threads, preserving index order.
pub fn map_indexed<T, F>(len: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1).min(len.max(1));
    if workers <= 1 || len <= 1 {
        return (0..len).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = std::iter::repeat_with(|| None).take(len).collect();
    let chunk = len.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slice) in slots.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (off, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(w * chunk + off));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("worker filled slot"))
        .collect()
}
