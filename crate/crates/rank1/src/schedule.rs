//! Realising a family spec as a concrete stage-by-stage schedule.
//!
//! A [`Schedule`] lazily generates, per stage `j`: the cut count `r_j`, the
//! spacer vector `s̄_j` (materialised only when its length is within the
//! cap), the exact spacer sum `sigma_j`, the height `h_j` and level measure
//! `m_j`, and family-specific auxiliary data (Ornstein draws, Galois
//! generators). Rows are memoised behind a mutex, so a schedule can be
//! shared across worker threads; all generation is deterministic, stochastic
//! families included (the stream for stage `j` is derived from `(seed, j)`).

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::family::{FamilySpec, MassProfile};
use crate::galois::{self, FieldExt};
use crate::rule::{is_prime, nth_prime, pow_mod};
use crate::{Error, Result};

/// Default cap on materialised spacer-vector length.
pub const DEFAULT_MATERIALIZE_CAP: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub enum StageAux {
    Ornstein { draws: Arc<Vec<u64>> },
    GaloisPrime { p: u64, generator: u64 },
    GaloisTrace { base: u64, degree: usize },
}

struct Row {
    r: u64,
    sum: BigUint,
    spacers: Option<Arc<Vec<BigUint>>>,
    aux: Option<StageAux>,
    /// Height at this stage.
    height: BigUint,
    /// Denominator of the level measure `m_j = 1 / prod r_k`.
    measure_den: BigUint,
    offsets: Option<Arc<Vec<BigUint>>>,
}

#[derive(Default)]
struct GenScratch {
    trace_fields: BTreeMap<(u64, usize), Arc<(FieldExt, Vec<u64>)>>,
}

struct Inner {
    spec: FamilySpec,
    start_stage: u64,
    start_height: u64,
    materialize_cap: u64,
    state: Mutex<(Vec<Row>, GenScratch)>,
}

/// A realised spacer schedule. Cheap to clone and share.
#[derive(Clone)]
pub struct Schedule {
    inner: Arc<Inner>,
}

/// Build a schedule from a family spec, validating its parameters.
pub fn make_schedule(spec: FamilySpec) -> Result<Schedule> {
    Schedule::new(spec)
}

impl Schedule {
    pub fn new(spec: FamilySpec) -> Result<Schedule> {
        Schedule::with_materialize_cap(spec, DEFAULT_MATERIALIZE_CAP)
    }

    pub fn with_materialize_cap(spec: FamilySpec, cap: u64) -> Result<Schedule> {
        spec.validate()?;
        let (start_stage, start_height) = spec.start();
        Ok(Schedule {
            inner: Arc::new(Inner {
                spec,
                start_stage,
                start_height,
                materialize_cap: cap,
                state: Mutex::new((Vec::new(), GenScratch::default())),
            }),
        })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.inner.spec
    }

    pub fn start_stage(&self) -> u64 {
        self.inner.start_stage
    }

    fn index(&self, j: u64) -> Result<usize> {
        if j < self.inner.start_stage {
            return Err(Error::OutOfRange(format!(
                "stage {j} precedes start stage {}",
                self.inner.start_stage
            )));
        }
        Ok((j - self.inner.start_stage) as usize)
    }

    fn with_row<T>(&self, j: u64, f: impl FnOnce(&Row) -> T) -> Result<T> {
        let idx = self.index(j)?;
        let mut state = self.inner.state.lock().unwrap();
        while state.0.len() <= idx {
            let next_stage = self.inner.start_stage + state.0.len() as u64;
            let (height, measure_den) = match state.0.last() {
                None => (BigUint::from(self.inner.start_height), BigUint::one()),
                Some(prev) => (
                    &prev.height * prev.r + &prev.sum,
                    &prev.measure_den * BigUint::from(prev.r),
                ),
            };
            let raw = generate_stage(
                &self.inner.spec,
                next_stage,
                &height,
                self.inner.materialize_cap,
                &mut state.1,
            )?;
            if raw.r < 2 {
                return Err(Error::InvalidSchedule {
                    stage: next_stage,
                    reason: format!("cut count r = {} is below 2", raw.r),
                });
            }
            state.0.push(Row {
                r: raw.r,
                sum: raw.sum,
                spacers: raw.spacers.map(Arc::new),
                aux: raw.aux,
                height,
                measure_den,
                offsets: None,
            });
        }
        Ok(f(&state.0[idx]))
    }

    pub fn height(&self, j: u64) -> Result<BigUint> {
        self.with_row(j, |row| row.height.clone())
    }

    /// `m_j` with the base level of the start stage carrying measure 1,
    /// i.e. `m_j = 1 / prod_(k<j) r_k`.
    pub fn level_measure(&self, j: u64) -> Result<BigRational> {
        self.with_row(j, |row| {
            BigRational::new(num_bigint::BigInt::one(), row.measure_den.clone().into())
        })
    }

    pub fn cut_count(&self, j: u64) -> Result<u64> {
        self.with_row(j, |row| row.r)
    }

    pub fn spacer_total(&self, j: u64) -> Result<BigUint> {
        self.with_row(j, |row| row.sum.clone())
    }

    /// Spacer mass added while stacking stage `j` into stage `j+1`:
    /// `sigma_j * m_(j+1)`.
    pub fn stage_mass(&self, j: u64) -> Result<BigRational> {
        let sum = self.spacer_total(j)?;
        let m_next = self.level_measure(j + 1)?;
        Ok(BigRational::from(num_bigint::BigInt::from(sum)) * m_next)
    }

    /// The spacer vector `s̄_j`, 1-based in the written formulas; index 0 of
    /// the returned slice is `s_j(1)`.
    pub fn spacers(&self, j: u64) -> Result<Arc<Vec<BigUint>>> {
        self.with_row(j, |row| row.spacers.clone())?.ok_or_else(|| {
            Error::SizeBudgetExceeded(format!(
                "stage {j} has cut count above the materialisation cap {}",
                self.inner.materialize_cap
            ))
        })
    }

    /// Column offsets `o_j(i) = sum_(u<i) (h_j + s_j(u))`; index 0 is column 1
    /// with offset 0.
    pub fn offsets(&self, j: u64) -> Result<Arc<Vec<BigUint>>> {
        let idx = self.index(j)?;
        // ensure the row exists first
        self.with_row(j, |_| ())?;
        let mut state = self.inner.state.lock().unwrap();
        let row = &state.0[idx];
        if let Some(o) = &row.offsets {
            return Ok(o.clone());
        }
        let spacers = row.spacers.clone().ok_or_else(|| {
            Error::SizeBudgetExceeded(format!(
                "offsets at stage {j} need a materialised spacer vector"
            ))
        })?;
        let h = row.height.clone();
        let mut offsets = Vec::with_capacity(spacers.len());
        let mut acc = BigUint::zero();
        for s in spacers.iter() {
            offsets.push(acc.clone());
            acc += &h;
            acc += s;
        }
        let offsets = Arc::new(offsets);
        state.0[idx].offsets = Some(offsets.clone());
        Ok(offsets)
    }

    pub fn aux(&self, j: u64) -> Result<Option<StageAux>> {
        self.with_row(j, |row| row.aux.clone())
    }

    pub fn ornstein_draws(&self, j: u64) -> Result<Option<Arc<Vec<u64>>>> {
        Ok(self.aux(j)?.and_then(|aux| match aux {
            StageAux::Ornstein { draws } => Some(draws),
            _ => None,
        }))
    }

    /// First stage (scanning at most `limit` stages) whose cut count equals
    /// `r`; used to locate slow-growth blocks.
    pub fn first_stage_with_cut(&self, r: u64, limit: u64) -> Result<Option<u64>> {
        for j in self.inner.start_stage..self.inner.start_stage + limit {
            if self.cut_count(j)? == r {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// Declared spacer-mass behaviour, with family-level declarations
    /// refined by schedule data where possible.
    pub fn mass_profile(&self) -> Result<MassProfile> {
        let base = self.inner.spec.mass_profile();
        if let (MassProfile::Unknown, FamilySpec::GaloisPrimitive { .. }) =
            (&base, &self.inner.spec)
        {
            // ratio <= (2r+1)/(r^2-r) <= 11/20 once r_j >= 5 (with the
            // Bertrand cap r_(j+1) <= 2 r_j of the prime rules)
            for j in self.inner.start_stage..self.inner.start_stage + 64 {
                if self.cut_count(j)? >= 5 {
                    return Ok(MassProfile::GeometricBound { num: 11, den: 20, from_stage: j });
                }
            }
        }
        Ok(base)
    }
}

impl std::fmt::Debug for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Schedule")
            .field("family", &self.inner.spec.tag())
            .field("start_stage", &self.inner.start_stage)
            .finish()
    }
}

struct RawStage {
    r: u64,
    sum: BigUint,
    spacers: Option<Vec<BigUint>>,
    aux: Option<StageAux>,
}

impl RawStage {
    fn from_u64s(v: Vec<u64>) -> RawStage {
        let spacers: Vec<BigUint> = v.into_iter().map(BigUint::from).collect();
        RawStage::from_vec(spacers)
    }

    fn from_vec(spacers: Vec<BigUint>) -> RawStage {
        let sum = spacers.iter().sum();
        RawStage { r: spacers.len() as u64, sum, spacers: Some(spacers), aux: None }
    }
}

fn generate_stage(
    spec: &FamilySpec,
    j: u64,
    h: &BigUint,
    cap: u64,
    scratch: &mut GenScratch,
) -> Result<RawStage> {
    match spec {
        FamilySpec::Odometer { r } => {
            let r = r.eval(j)?;
            Ok(RawStage {
                r,
                sum: BigUint::zero(),
                spacers: if r <= cap { Some(vec![BigUint::zero(); r as usize]) } else { None },
                aux: None,
            })
        }
        FamilySpec::ChaconClassical => Ok(RawStage::from_u64s(vec![0, 1])),
        FamilySpec::ChaconModified => Ok(RawStage::from_u64s(vec![0, 1, 0])),
        FamilySpec::Chacon231 => Ok(RawStage::from_u64s(vec![2, 3, 1])),
        FamilySpec::DelJuncoRudolph { r } => {
            let r = r.eval(j)? as usize;
            let mut v = vec![0u64; r];
            if r > 0 {
                v[r / 2] = 1;
            }
            Ok(RawStage::from_u64s(v))
        }
        FamilySpec::Katok { r } => {
            let r = r.eval(j)? as usize;
            let ones = r / 2;
            let mut v = vec![0u64; r];
            for s in v.iter_mut().skip(r - ones) {
                *s = 1;
            }
            Ok(RawStage::from_u64s(v))
        }
        FamilySpec::Semibounded { s } => Ok(RawStage::from_u64s(vec![0, s.eval(j)?, 0])),
        FamilySpec::PrimeSpacers => {
            let p = nth_prime(j - 1)?;
            Ok(RawStage::from_u64s(vec![0, p, 0]))
        }
        FamilySpec::Ornstein { r, window, seed } => {
            let r = r.eval(j)?;
            let hj = window.eval(j)?;
            if hj == 0 {
                return Err(Error::InvalidSchedule { stage: j, reason: "H_j = 0".into() });
            }
            if r > cap {
                return Err(Error::SizeBudgetExceeded(format!(
                    "ornstein stage {j} needs {r} draws, above the cap {cap}"
                )));
            }
            let mut rng = stage_rng(*seed, j);
            let draws: Vec<u64> = (0..=r).map(|_| draw_uniform(&mut rng, hj)).collect();
            // H + a(i) - a(i+1) >= 1 since a-values stay below H
            let spacers: Vec<BigUint> =
                (0..r as usize).map(|i| BigUint::from(hj + draws[i] - draws[i + 1])).collect();
            let sum = spacers.iter().sum();
            Ok(RawStage {
                r,
                sum,
                spacers: Some(spacers),
                aux: Some(StageAux::Ornstein { draws: Arc::new(draws) }),
            })
        }
        FamilySpec::Staircase { r } => {
            let r = r.eval(j)?;
            let sum = BigUint::from(r) * BigUint::from(r + 1) / BigUint::from(2u32);
            let spacers =
                if r <= cap { Some((1..=r).map(BigUint::from).collect::<Vec<_>>()) } else { None };
            Ok(RawStage { r, sum, spacers, aux: None })
        }
        FamilySpec::SlowGrowth { block } => {
            let r = slow_growth_cut(block, j)?;
            let sum = BigUint::from(r) * BigUint::from(r - 1) / BigUint::from(2u32);
            let spacers = if r <= cap {
                let mut v: Vec<BigUint> = (1..r).map(BigUint::from).collect();
                v.push(BigUint::zero());
                Some(v)
            } else {
                None
            };
            Ok(RawStage { r, sum, spacers, aux: None })
        }
        FamilySpec::GaloisPrimitive { primes } => {
            let p = primes.eval(j)?;
            if !is_prime(p) {
                return Err(Error::InvalidSchedule {
                    stage: j,
                    reason: format!("cut count {p} must be prime"),
                });
            }
            let g = galois::primitive_root(p)?;
            let aux = Some(StageAux::GaloisPrime { p, generator: g });
            if p <= cap {
                let mut spacers = Vec::with_capacity(p as usize);
                let mut cur = g % p; // {q^1}
                for _ in 1..=p {
                    let next = crate::rule::mul_mod(cur, g, p);
                    spacers.push(BigUint::from(p + cur - next));
                    cur = next;
                }
                let sum = spacers.iter().sum();
                Ok(RawStage { r: p, sum, spacers: Some(spacers), aux })
            } else {
                // telescoping: sigma = p^2 + {q} - {q^2} (q has order p-1)
                let q1 = g % p;
                let q2 = pow_mod(g, 2, p);
                let sum =
                    BigUint::from(p) * BigUint::from(p) + BigUint::from(q1) - BigUint::from(q2);
                Ok(RawStage { r: p, sum, spacers: None, aux })
            }
        }
        FamilySpec::GaloisTrace { base, degree } => {
            let n = degree.eval(j)? as usize;
            let key = (*base, n);
            let field = match scratch.trace_fields.get(&key) {
                Some(f) => f.clone(),
                None => {
                    let f = FieldExt::new(*base, n)?;
                    let g = f.generator()?;
                    let entry = Arc::new((f, g));
                    scratch.trace_fields.insert(key, entry.clone());
                    entry
                }
            };
            let (field, gen) = (&field.0, &field.1);
            let r = field.order;
            if r < 2 {
                return Err(Error::InvalidSchedule {
                    stage: j,
                    reason: format!("trace field F_{}^{n} has group order {r} < 2", base),
                });
            }
            let aux = Some(StageAux::GaloisTrace { base: *base, degree: n });
            if r <= cap {
                let table = field.trace_table()?;
                let mut traces = Vec::with_capacity(r as usize + 1);
                let mut cur = gen.clone(); // q^1
                for _ in 1..=r + 1 {
                    traces.push(field.trace_with_table(&cur, &table));
                    cur = field.mul(&cur, gen);
                }
                let spacers: Vec<BigUint> = (0..r as usize)
                    .map(|i| BigUint::from(base + traces[i] - traces[i + 1]))
                    .collect();
                let sum = spacers.iter().sum();
                Ok(RawStage { r, sum, spacers: Some(spacers), aux })
            } else {
                // a(r+1) = tr(q^(r+1)) = tr(q), so the sum telescopes to r*b
                let sum = BigUint::from(r) * BigUint::from(*base);
                Ok(RawStage { r, sum, spacers: None, aux })
            }
        }
        FamilySpec::Sidon { ratio_num, ratio_den, r } => {
            let r = r.eval(j)?;
            let num = BigUint::from(*ratio_num);
            let den = BigUint::from(*ratio_den);
            let mut pow_num = BigUint::one();
            let mut pow_den = BigUint::one();
            let mut spacers = Vec::with_capacity(r as usize);
            for _ in 1..=r {
                pow_num *= &num;
                pow_den *= &den;
                // ceil(num^i / den^i) * h
                let ceil = (&pow_num + &pow_den - BigUint::one()) / &pow_den;
                spacers.push(ceil * h);
            }
            Ok(RawStage::from_vec(spacers))
        }
        FamilySpec::SelfSimilar { coeffs } => {
            let spacers: Vec<BigUint> = coeffs.iter().map(|&v| BigUint::from(v) * h).collect();
            Ok(RawStage::from_vec(spacers))
        }
        FamilySpec::Factorial => {
            // r_j = j, s_j(i) = (j-1)!
            let mut fact = BigUint::one();
            for k in 2..j {
                fact *= BigUint::from(k);
            }
            Ok(RawStage::from_vec(vec![fact; j as usize]))
        }
        FamilySpec::Binomial => {
            // r_j = j + 1, s_j(i) = C(j, i), with C(j, j+1) = 0
            let mut spacers = Vec::with_capacity(j as usize + 1);
            let mut c = BigUint::from(j); // C(j, 1)
            for i in 1..=j + 1 {
                spacers.push(c.clone());
                // C(j, i+1) = C(j, i) * (j - i) / (i + 1)
                c = if i <= j { c * BigUint::from(j - i) / BigUint::from(i + 1) } else { c };
                if i == j {
                    c = BigUint::zero();
                }
            }
            Ok(RawStage::from_vec(spacers))
        }
        FamilySpec::CustomFixed { stages } => {
            let k = ((j - 1) % stages.len() as u64) as usize;
            Ok(RawStage::from_u64s(stages[k].spacers.clone()))
        }
    }
}

fn slow_growth_cut(block: &crate::rule::BlockRule, j: u64) -> Result<u64> {
    // stage 1 starts the r = 2 block
    let mut start = 1u64;
    let mut r = 2u64;
    loop {
        let len = block.eval(r)?;
        let end = start.checked_add(len).ok_or_else(|| {
            Error::InvalidParam("slow-growth stage index beyond the u64 range".into())
        })?;
        if j < end {
            return Ok(r);
        }
        start = end;
        r += 1;
    }
}

fn stage_rng(seed: u64, stage: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stage.to_le_bytes());
    key[16..24].copy_from_slice(b"spacers!");
    ChaCha8Rng::from_seed(key)
}

/// Unbiased uniform draw in `[0, bound)` by rejection on `next_u64`.
fn draw_uniform(rng: &mut impl RngCore, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = (u64::MAX / bound) * bound;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

/// Ornstein spacer vector from explicit draws; exposed for direct checks of
/// the defining formula.
pub fn ornstein_vector(window: u64, draws: &[u64]) -> Vec<u64> {
    (0..draws.len() - 1).map(|i| window + draws[i] - draws[i + 1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::preset;
    use crate::rule::IntRule;

    fn heights(tag: &str, upto: u64) -> Vec<BigUint> {
        let s = Schedule::new(preset(tag).unwrap()).unwrap();
        (s.start_stage()..=upto).map(|j| s.height(j).unwrap()).collect()
    }

    #[test]
    fn chacon_heights() {
        assert_eq!(
            heights("chacon-classical", 5),
            [1u32, 3, 7, 15, 31].map(BigUint::from).to_vec()
        );
    }

    #[test]
    fn odometer_heights() {
        assert_eq!(heights("odometer", 4), [1u32, 2, 4, 8].map(BigUint::from).to_vec());
    }

    #[test]
    fn factorial_heights() {
        // starts at stage 2 with h = 2; h_j = j!
        assert_eq!(heights("factorial", 5), [2u32, 6, 24, 120].map(BigUint::from).to_vec());
    }

    #[test]
    fn self_similar_vector_and_height() {
        let s = Schedule::new(FamilySpec::SelfSimilar { coeffs: vec![0, 1, 2] }).unwrap();
        let h3 = s.height(3).unwrap();
        let v = s.spacers(3).unwrap();
        assert_eq!(v[0], BigUint::zero());
        assert_eq!(v[1], h3);
        assert_eq!(v[2], &h3 * 2u32);
        assert_eq!(s.height(4).unwrap(), &h3 * 6u32);
    }

    #[test]
    fn ornstein_formula_and_determinism() {
        // the defining formula on explicit draws
        assert_eq!(ornstein_vector(4, &[2, 0, 3, 1]), vec![6, 1, 6]);

        let spec = preset("ornstein").unwrap();
        let a = Schedule::new(spec.clone()).unwrap();
        let b = Schedule::new(spec).unwrap();
        for j in 1..=3 {
            assert_eq!(a.spacers(j).unwrap(), b.spacers(j).unwrap());
            assert_eq!(a.ornstein_draws(j).unwrap(), b.ornstein_draws(j).unwrap());
        }
        // draws land in [0, H) and spacers in [1, 2H-1]
        let draws = a.ornstein_draws(2).unwrap().unwrap();
        assert_eq!(draws.len(), 4097);
        assert!(draws.iter().all(|&d| d < 64));
        let sp = a.spacers(2).unwrap();
        assert!(sp.iter().all(|s| {
            let v: u64 = s.try_into().unwrap();
            (1..=127).contains(&v)
        }));
    }

    #[test]
    fn offsets_sum_to_next_height() {
        for tag in ["chacon-classical", "staircase", "sidon", "binomial"] {
            let s = Schedule::new(preset(tag).unwrap()).unwrap();
            for j in s.start_stage()..s.start_stage() + 5 {
                let o = s.offsets(j).unwrap();
                let sp = s.spacers(j).unwrap();
                let h = s.height(j).unwrap();
                let last = o.last().unwrap() + &h + sp.last().unwrap();
                assert_eq!(last, s.height(j + 1).unwrap(), "family {tag} stage {j}");
                assert!(o.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn galois_primitive_vectors() {
        let s = Schedule::new(preset("galois-primitive").unwrap()).unwrap();
        // stage 3: p = 5, generator 2, powers 2,4,3,1,2: s_i = 5 + P[i] - P[i+1]
        assert_eq!(s.cut_count(3).unwrap(), 5);
        let v = s.spacers(3).unwrap();
        let expect = [5 + 2 - 4, 5 + 4 - 3, 5 + 3 - 1, 5 + 1 - 2, 5 + 2 - 4];
        assert_eq!(v.iter().map(|x| u64::try_from(x).unwrap()).collect::<Vec<_>>(), expect);
        // telescoped sum formula matches the materialised sum
        let sum: BigUint = v.iter().sum();
        assert_eq!(sum, s.spacer_total(3).unwrap());
    }

    #[test]
    fn trace_sum_telescopes() {
        let s = Schedule::new(preset("galois-trace").unwrap()).unwrap();
        for j in 1..=8 {
            let r = s.cut_count(j).unwrap();
            let v = s.spacers(j).unwrap();
            let sum: BigUint = v.iter().sum();
            assert_eq!(sum, BigUint::from(2u64) * BigUint::from(r), "stage {j}");
            assert_eq!(sum, s.spacer_total(j).unwrap());
        }
    }

    #[test]
    fn slow_growth_blocks() {
        let s = Schedule::new(preset("slow-growth").unwrap()).unwrap();
        // N(r) = 4r: r=2 on stages 1..9, r=3 on 9..21, r=4 on 21..37
        assert_eq!(s.cut_count(1).unwrap(), 2);
        assert_eq!(s.cut_count(8).unwrap(), 2);
        assert_eq!(s.cut_count(9).unwrap(), 3);
        assert_eq!(s.first_stage_with_cut(4, 100).unwrap(), Some(21));
        assert_eq!(s.first_stage_with_cut(5, 100).unwrap(), Some(37));
        let v = s.spacers(9).unwrap();
        assert_eq!(
            v.iter().map(|x| u64::try_from(x).unwrap()).collect::<Vec<_>>(),
            vec![1, 2, 0]
        );
    }

    #[test]
    fn stage_rule_rejects_bad_cuts() {
        let s = Schedule::new(FamilySpec::Odometer { r: IntRule::Const { value: 1 } }).unwrap();
        assert!(matches!(s.height(2), Err(Error::InvalidSchedule { .. })));
        let s = Schedule::new(FamilySpec::GaloisPrimitive { primes: IntRule::Const { value: 9 } })
            .unwrap();
        assert!(matches!(s.height(2), Err(Error::InvalidSchedule { .. })));
    }
}
