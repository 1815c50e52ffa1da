//! Permutation visitor used by the brute-force isomorphism routines.

/// Visits every permutation of `0..n` (starting with the identity) and calls
/// `f` on each. Returning `false` from `f` stops the walk early.
///
/// Heap's algorithm; the slice passed to `f` is reused between calls.
pub fn visit_permutations<F: FnMut(&[usize]) -> bool>(n: usize, mut f: F) {
    let mut items: Vec<usize> = (0..n).collect();
    if !f(&items) {
        return;
    }
    if n < 2 {
        return;
    }
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            if !f(&items) {
                return;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
