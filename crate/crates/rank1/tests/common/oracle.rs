//! Brute-force interval-exchange oracle.
//!
//! Builds the cutting-and-stacking construction geometrically: the space is
//! a union of rational intervals, a stage's tower is the ordered list of its
//! level intervals, cutting subdivides intervals in place, and spacers are
//! fresh intervals appended at the right end of the space. Shifted
//! intersection measures are evaluated by following tower order and testing
//! interval membership geometrically. No code is shared with the engine's
//! offset arithmetic: heights, offsets and decoding never appear here.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The construction realised to a fixed depth.
pub struct Oracle {
    /// `towers[d]` = interval start positions of the stage `start + d`
    /// tower, in tower order (level 0 first).
    pub towers: Vec<Vec<BigRational>>,
    /// Level interval width per built stage.
    pub widths: Vec<BigRational>,
    /// Deepest tower's intervals sorted by position: `(start, tower index)`.
    deep_sorted: Vec<(BigRational, usize)>,
}

impl Oracle {
    /// Build from raw per-stage `(r_j, spacers)` data, starting from a
    /// single unit interval.
    pub fn build(stage_data: &[(u64, Vec<u64>)]) -> Oracle {
        let mut towers: Vec<Vec<BigRational>> = vec![vec![BigRational::zero()]];
        let mut widths = vec![BigRational::one()];
        // cursor: right end of the currently allocated space
        let mut cursor = BigRational::one();
        for (r, spacers) in stage_data {
            let prev = towers.last().unwrap();
            let w_prev = widths.last().unwrap().clone();
            let w = &w_prev / BigRational::from(BigInt::from(*r));
            assert_eq!(spacers.len() as u64, *r);
            let mut next = Vec::with_capacity(prev.len() * *r as usize + 8);
            for (col, s) in spacers.iter().enumerate() {
                // column `col`: the col-th subdivision piece of every level,
                // in tower order
                let shift = &w * BigRational::from(BigInt::from(col));
                for start in prev {
                    next.push(start + &shift);
                }
                // then its spacers, freshly allocated on the right
                for _ in 0..*s {
                    next.push(cursor.clone());
                    cursor += &w;
                }
            }
            towers.push(next);
            widths.push(w);
        }
        let mut deep_sorted: Vec<(BigRational, usize)> =
            towers.last().unwrap().iter().cloned().zip(0..).collect();
        deep_sorted.sort_by(|a, b| a.0.cmp(&b.0));
        Oracle { towers, widths, deep_sorted }
    }

    fn depth(&self) -> usize {
        self.towers.len() - 1
    }

    /// Deep-tower indices whose intervals lie inside one of the given
    /// stage-`d` level intervals (`d` counted from the start stage).
    fn deep_indices(&self, d: usize, levels: &[u64]) -> Vec<usize> {
        let shallow = &self.towers[d];
        let w_shallow = &self.widths[d];
        let mut out = Vec::new();
        for &l in levels {
            let a = &shallow[l as usize];
            let b = a + w_shallow;
            let from = self.deep_sorted.partition_point(|(s, _)| s < a);
            for (s, idx) in &self.deep_sorted[from..] {
                if s >= &b {
                    break;
                }
                out.push(*idx);
            }
        }
        out.sort_unstable();
        out
    }

    /// `mu(T^n A ∩ B)` for level sets at stage offset `d`, with `n >= 0`,
    /// returned as `(lower, undefined_mass)`: the true value lies in
    /// `[lower, lower + undefined_mass]`, and `undefined_mass = 0` means the
    /// value is exact.
    pub fn shifted_intersection(
        &self,
        d: usize,
        a_levels: &[u64],
        n: u64,
        b_levels: &[u64],
    ) -> (BigRational, BigRational) {
        let deep = self.towers.last().unwrap();
        let w_deep = self.widths[self.depth()].clone();
        let h_deep = deep.len();
        let shallow = &self.towers[d];
        let w_shallow = &self.widths[d];

        let mut b_starts: Vec<&BigRational> =
            b_levels.iter().map(|&l| &shallow[l as usize]).collect();
        b_starts.sort();

        let a_idx = self.deep_indices(d, a_levels);
        let mut hits = 0u64;
        let mut lost = 0u64;
        for idx in a_idx {
            let target = idx + n as usize;
            if target >= h_deep {
                lost += 1;
                continue;
            }
            let pos = &deep[target];
            // predecessor start among B's (disjoint, equal-width) intervals
            let at = b_starts.partition_point(|s| *s <= pos);
            if at > 0 && pos < &(b_starts[at - 1] + w_shallow) {
                hits += 1;
            }
        }
        (
            BigRational::from(BigInt::from(hits)) * &w_deep,
            BigRational::from(BigInt::from(lost)) * w_deep,
        )
    }

    /// `mu(T^n1 A ∩ T^n2 B ∩ C)` with `n1 >= n2 >= 0`, all at stage offset
    /// `d`; same `(lower, undefined)` convention as the pair query.
    pub fn triple_intersection(
        &self,
        d: usize,
        a_levels: &[u64],
        n1: u64,
        b_levels: &[u64],
        n2: u64,
        c_levels: &[u64],
    ) -> (BigRational, BigRational) {
        assert!(n1 >= n2);
        let deep = self.towers.last().unwrap();
        let w_deep = self.widths[self.depth()].clone();
        let h_deep = deep.len();
        let shallow = &self.towers[d];
        let w_shallow = &self.widths[d];
        let member = |pos: &BigRational, levels: &[u64]| {
            levels.iter().any(|&l| {
                let a = &shallow[l as usize];
                pos >= a && pos < &(a + w_shallow)
            })
        };
        let mut hits = 0u64;
        let mut lost = 0u64;
        for idx in self.deep_indices(d, a_levels) {
            let t1 = idx + n1 as usize;
            if t1 >= h_deep {
                lost += 1;
                continue;
            }
            if member(&deep[t1], c_levels) && member(&deep[t1 - n2 as usize], b_levels) {
                hits += 1;
            }
        }
        (
            BigRational::from(BigInt::from(hits)) * &w_deep,
            BigRational::from(BigInt::from(lost)) * w_deep,
        )
    }

    /// Total allocated space so far (lower bound for the full construction).
    pub fn space(&self) -> BigRational {
        let deep = self.towers.last().unwrap();
        BigRational::from(BigInt::from(deep.len())) * self.widths.last().unwrap()
    }
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn chacon_geometry() {
        // s̄ = (0, 1) twice: stage-2 tower has 3 levels, stage-3 has 7
        let data = vec![(2, vec![0, 1]), (2, vec![0, 1])];
        let o = Oracle::build(&data);
        assert_eq!(o.towers[1].len(), 3);
        assert_eq!(o.towers[2].len(), 7);
        // mu(T^3 E_2 ∩ E_2) = 1/4 with E_2 = level 0 of stage 2
        let (lo, lost) = o.shifted_intersection(1, &[0], 3, &[0]);
        assert!(lost.is_zero());
        assert_eq!(lo, BigRational::new(BigInt::from(1), BigInt::from(4)));
        // identity lag is the full measure of A: two levels of width 1/2
        let (lo, lost) = o.shifted_intersection(1, &[0, 2], 0, &[0, 2]);
        assert!(lost.is_zero());
        assert_eq!(lo, BigRational::one());
    }
}
