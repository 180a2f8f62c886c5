use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GridGeometry, GridSet};
use crate::error::{Error, Result};

/// Largest `m·n` accepted by [`enumerate_hv_connected`].
pub const ENUMERATION_LIMIT: usize = 20;

/// Seeded random hv-convex connected set.
///
/// Columns `lo..=hi` are filled with runs `[bottom, top)` where `top` is
/// unimodal and `bottom` anti-unimodal across columns, which makes every row a
/// single run. Consecutive column runs are forced to touch, which makes
/// adjacent rows touch as well and the union connected. With
/// `require_full_box` every column is used and the extreme rows are reached.
pub fn sample_hv_convex(geom: GridGeometry, seed: u64, require_full_box: bool) -> GridSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = (geom.m(), geom.n());

    let (lo, hi) = if require_full_box {
        (0, m - 1)
    } else {
        let a = rng.gen_range(0..m);
        let b = rng.gen_range(0..m);
        (a.min(b), a.max(b))
    };
    let (top_max, bottom_min) = if require_full_box {
        (n, 0)
    } else {
        let t = rng.gen_range(1..=n);
        (t, rng.gen_range(0..t))
    };
    let peak = rng.gen_range(lo..=hi);
    let valley = rng.gen_range(lo..=hi);

    let mut set = GridSet::empty(geom);
    let mut prev: Option<(usize, usize)> = None;
    let mut candidates = Vec::with_capacity(n * (n + 1) / 2);
    for i in lo..=hi {
        candidates.clear();
        for bottom in bottom_min..top_max {
            for top in bottom + 1..=top_max {
                let top_ok = match i.cmp(&peak) {
                    std::cmp::Ordering::Equal => top == top_max,
                    std::cmp::Ordering::Less => prev.is_none_or(|(_, t)| top >= t),
                    std::cmp::Ordering::Greater => prev.is_none_or(|(_, t)| top <= t),
                };
                let bottom_ok = match i.cmp(&valley) {
                    std::cmp::Ordering::Equal => bottom == bottom_min,
                    std::cmp::Ordering::Less => prev.is_none_or(|(b, _)| bottom <= b),
                    std::cmp::Ordering::Greater => prev.is_none_or(|(b, _)| bottom >= b),
                };
                let touches = prev.is_none_or(|(b, t)| bottom <= t && b <= top);
                if top_ok && bottom_ok && touches {
                    candidates.push((bottom, top));
                }
            }
        }
        // never empty: the previous run, pinned to the extreme at the peak or
        // valley column, always qualifies
        let (bottom, top) = candidates[rng.gen_range(0..candidates.len())];
        for j in bottom..top {
            set.cells[geom.index(i, j)] = true;
        }
        prev = Some((bottom, top));
    }
    debug_assert!(set.is_hv_convex() && set.is_connected());
    set
}

/// Every hv-convex connected set on `geom`, in lexicographic order of the
/// row-major cell indicator (`false < true`).
pub fn enumerate_hv_connected(geom: GridGeometry, require_full_box: bool) -> Result<Vec<GridSet>> {
    let cells = geom.cell_count();
    if cells > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            cells,
            limit: ENUMERATION_LIMIT,
        });
    }
    let rect = geom.rect();
    let mut out = Vec::new();
    // cell k maps to bit (cells - 1 - k), so ascending masks are lexicographic
    for mask in 1u32..(1u32 << cells) {
        let indicator = (0..cells).map(|k| mask >> (cells - 1 - k) & 1 == 1).collect();
        let set = GridSet::new(geom, indicator)?;
        if set.is_hv_convex() && set.is_connected() && (!require_full_box || set.in_level_set(&rect)) {
            out.push(set);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_feasible_and_deterministic() {
        let g = GridGeometry::unit(7, 5).unwrap();
        for seed in 0..200 {
            for full in [false, true] {
                let s = sample_hv_convex(g, seed, full);
                assert!(s.is_hv_convex() && s.is_connected());
                if full {
                    assert!(s.in_level_set(&g.rect()));
                }
                assert_eq!(s, sample_hv_convex(g, seed, full));
            }
        }
    }

    #[test]
    fn samples_on_degenerate_grids() {
        for (m, n) in [(1, 1), (1, 6), (6, 1)] {
            let g = GridGeometry::unit(m, n).unwrap();
            for seed in 0..20 {
                let s = sample_hv_convex(g, seed, true);
                assert!(s.in_level_set(&g.rect()));
            }
        }
    }

    #[test]
    fn small_enumeration_counts() {
        let count = |m, n| enumerate_hv_connected(GridGeometry::unit(m, n).unwrap(), false).unwrap().len();
        assert_eq!(count(1, 1), 1);
        assert_eq!(count(1, 2), 3);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let sets = enumerate_hv_connected(GridGeometry::unit(2, 2).unwrap(), false).unwrap();
        for w in sets.windows(2) {
            assert!(w[0].indicator() < w[1].indicator());
        }
    }

    #[test]
    fn enumeration_guard() {
        let g = GridGeometry::unit(5, 5).unwrap();
        assert!(matches!(enumerate_hv_connected(g, false), Err(Error::TooLarge { cells: 25, .. })));
    }
}
