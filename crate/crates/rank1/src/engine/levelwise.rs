//! Reference evaluation by explicit refinement and decoding.
//!
//! This is the direct route: refine `A` to a stage taller than the lag,
//! walk its levels, classify each shifted image with [`decode_level`], and
//! push the roof-escaping remainder up stage by stage. It materialises the
//! refined set, so it only works within the size budget — the transfer
//! path in the parent module is the scalable one — but it exercises the
//! decode machinery directly and serves as an internal cross-check. The
//! triple intersection lives here because its membership tests are decode
//! queries by construction.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::enclosure::Enclosure;
use crate::tower::{decode_level, refine_set, LevelProvenance, LevelSet};
use crate::{Error, Result};

use super::Engine;

impl Engine {
    /// `mu(T^n A ∩ B)` by explicit enumeration; same contract as
    /// [`Engine::shifted_intersection`].
    pub fn shifted_intersection_levelwise(
        &self,
        a: &LevelSet,
        n: &BigInt,
        b: &LevelSet,
        tol: &BigRational,
    ) -> Result<Enclosure> {
        if a.stage != b.stage {
            return Err(Error::InvalidParam("sets must share a stage".into()));
        }
        if n.is_negative() {
            return self.shifted_intersection_levelwise(b, &-n, a, tol);
        }
        let sched = self.schedule();
        let stage = a.stage;
        let mut top = stage;
        while BigInt::from(sched.height(top)?) <= *n {
            top += 1;
        }
        let refined = refine_set(sched, a, top, self.options().size_cap)?;
        let n_u = n.to_biguint().expect("non-negative lag");

        let mut inside = BigUint::zero();
        let mut escaped: Vec<BigUint> = Vec::new();
        let h_top = sched.height(top)?;
        for l in &refined.levels {
            let q = l + &n_u;
            if q < h_top {
                if let LevelProvenance::BaseLevel(base) = decode_level(sched, top, &q, stage)? {
                    if b.contains(&base) {
                        inside += 1u32;
                    }
                }
            } else {
                escaped.push(l.clone());
            }
        }

        let mut lo = BigRational::from(BigInt::from(inside)) * sched.level_measure(top)?;
        let mut cur = top;
        for _ in 0..=self.options().max_extra_stages {
            if escaped.is_empty() {
                return Ok(Enclosure::exact(lo));
            }
            let escape_mass =
                BigRational::from(BigInt::from(escaped.len())) * sched.level_measure(cur)?;
            if escape_mass <= *tol {
                return Ok(Enclosure::new(lo.clone(), lo + escape_mass));
            }
            // map the escape set through the next stacking
            let next = cur + 1;
            if (escaped.len() as u64).saturating_mul(sched.cut_count(cur)?)
                > self.options().size_cap
            {
                return Err(Error::SizeBudgetExceeded(format!(
                    "escape set of {} levels cannot climb past stage {cur}",
                    escaped.len()
                )));
            }
            let offsets = sched.offsets(cur)?;
            let h_next = sched.height(next)?;
            let mut still = Vec::new();
            for o in offsets.iter() {
                for l in &escaped {
                    let lifted = o + l;
                    let q = &lifted + &n_u;
                    if q < h_next {
                        if let LevelProvenance::BaseLevel(base) =
                            decode_level(sched, next, &q, stage)?
                        {
                            if b.contains(&base) {
                                lo += sched.level_measure(next)?;
                            }
                        }
                    } else {
                        still.push(lifted);
                    }
                }
            }
            escaped = still;
            cur = next;
        }
        let escape_mass =
            BigRational::from(BigInt::from(escaped.len())) * sched.level_measure(cur)?;
        Err(Error::StageBudgetExceeded {
            partial: Enclosure::new(lo.clone(), lo + escape_mass),
        })
    }

    /// Enclosure of `mu(T^n1 A ∩ T^n2 B ∩ C)` for `n1 >= n2 >= 0`.
    ///
    /// Enumerates refined `A`; a level `l` contributes when `l + n1` is a
    /// copy of a `C` level and `l + n1 - n2` a copy of a `B` level (both by
    /// decoding). Roof-escaping levels climb stages like the pair case.
    pub fn triple_intersection(
        &self,
        a: &LevelSet,
        n1: &BigInt,
        b: &LevelSet,
        n2: &BigInt,
        c: &LevelSet,
        tol: &BigRational,
    ) -> Result<Enclosure> {
        if n1.is_negative() || n2.is_negative() || n1 < n2 {
            return Err(Error::InvalidParam("triple intersection needs n1 >= n2 >= 0".into()));
        }
        if a.stage != b.stage || a.stage != c.stage {
            return Err(Error::InvalidParam("sets must share a stage".into()));
        }
        let sched = self.schedule();
        let stage = a.stage;
        let mut top = stage;
        while BigInt::from(sched.height(top)?) <= *n1 {
            top += 1;
        }
        let refined = refine_set(sched, a, top, self.options().size_cap)?;
        let n1_u = n1.to_biguint().unwrap();
        let n2_u = n2.to_biguint().unwrap();

        let member = |at: u64, pos: &BigUint, set: &LevelSet| -> Result<bool> {
            Ok(match decode_level(sched, at, pos, stage)? {
                LevelProvenance::BaseLevel(base) => set.contains(&base),
                LevelProvenance::Spacer { .. } => false,
            })
        };

        let mut lo = BigRational::zero();
        let mut escaped: Vec<BigUint> = Vec::new();
        let h_top = sched.height(top)?;
        let m_top = sched.level_measure(top)?;
        for l in &refined.levels {
            let q = l + &n1_u;
            if q < h_top {
                if member(top, &q, c)? && member(top, &(&q - &n2_u), b)? {
                    lo += &m_top;
                }
            } else {
                escaped.push(l.clone());
            }
        }

        let mut cur = top;
        for _ in 0..=self.options().max_extra_stages {
            if escaped.is_empty() {
                return Ok(Enclosure::exact(lo));
            }
            let escape_mass =
                BigRational::from(BigInt::from(escaped.len())) * sched.level_measure(cur)?;
            if escape_mass <= *tol {
                return Ok(Enclosure::new(lo.clone(), lo + escape_mass));
            }
            let next = cur + 1;
            if (escaped.len() as u64).saturating_mul(sched.cut_count(cur)?)
                > self.options().size_cap
            {
                return Err(Error::SizeBudgetExceeded(format!(
                    "triple escape set of {} levels cannot climb past stage {cur}",
                    escaped.len()
                )));
            }
            let offsets = sched.offsets(cur)?;
            let h_next = sched.height(next)?;
            let m_next = sched.level_measure(next)?;
            let mut still = Vec::new();
            for o in offsets.iter() {
                for l in &escaped {
                    let lifted = o + l;
                    let q = &lifted + &n1_u;
                    if q < h_next {
                        if member(next, &q, c)? && member(next, &(&q - &n2_u), b)? {
                            lo += &m_next;
                        }
                    } else {
                        still.push(lifted);
                    }
                }
            }
            escaped = still;
            cur = next;
        }
        let escape_mass =
            BigRational::from(BigInt::from(escaped.len())) * sched.level_measure(cur)?;
        Err(Error::StageBudgetExceeded {
            partial: Enclosure::new(lo.clone(), lo + escape_mass),
        })
    }
}
