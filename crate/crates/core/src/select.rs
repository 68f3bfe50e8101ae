//! Top-`L` index selection.
//!
//! The decoders repeatedly need the indices of the `L` largest hyperpriors
//! and decision magnitudes. The default path uses the standard library's
//! introselect (`select_nth_unstable_by`), which is linear time; a full-sort
//! fallback is available behind the same interface for cross-checking.
//! Ties always resolve toward the lower index, so both paths return the
//! same set.

use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// Linear-time selection.
    Quickselect,
    /// `O(M log M)` full sort; same results, simpler to audit.
    SortBased,
}

/// Comparator: larger key first, lower index first among equals.
#[inline]
fn rank(keys: &[f64], a: u32, b: u32) -> Ordering {
    keys[b as usize]
        .total_cmp(&keys[a as usize])
        .then(a.cmp(&b))
}

/// Indices of the `l` largest keys, ascending. For magnitude selection pass
/// absolute values as keys.
pub fn top_l_indices(keys: &[f64], l: usize, selection: Selection) -> Vec<usize> {
    let idx: Vec<u32> = (0..keys.len() as u32).collect();
    select_from(keys, idx, l, selection)
}

/// Indices of the `l` entries of `within` (a set of indices into `keys`,
/// magnitudes compared via `|keys[i]|`) with the largest magnitudes,
/// ascending. Used by the sparsification step, where decisions outside the
/// candidate set are not eligible.
pub fn top_l_within(keys: &[f64], within: &[usize], l: usize, selection: Selection) -> Vec<usize> {
    let idx: Vec<u32> = within.iter().map(|&i| i as u32).collect();
    let mags: Vec<f64> = keys.iter().map(|k| k.abs()).collect();
    select_from(&mags, idx, l, selection)
}

fn select_from(keys: &[f64], mut idx: Vec<u32>, l: usize, selection: Selection) -> Vec<usize> {
    let l = l.min(idx.len());
    if l == 0 {
        return Vec::new();
    }
    match selection {
        Selection::Quickselect => {
            if l < idx.len() {
                idx.select_nth_unstable_by(l - 1, |&a, &b| rank(keys, a, b));
                idx.truncate(l);
            }
        }
        Selection::SortBased => {
            idx.sort_unstable_by(|&a, &b| rank(keys, a, b));
            idx.truncate(l);
        }
    }
    let mut out: Vec<usize> = idx.into_iter().map(|i| i as usize).collect();
    out.sort_unstable();
    out
}
