/// Indices of the sliding window starting at `j`: j, j+1, ..., j+n-1, each
/// taken modulo `size`. Sliding one window from every start position covers
/// every axis position exactly `n` times (counting duplicates when n > size).
pub fn window_indices(j: usize, n: usize, size: usize) -> Vec<usize> {
    assert!(size >= 1 && n >= 1 && j < size, "window_indices({j}, {n}, {size})");
    (0..n).map(|i| (j + i) % size).collect()
}
