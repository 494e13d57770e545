//! Point counts, point enumeration, and sign classification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lang::{Var, VirtualSet};
use crate::lie::TripleSpec;
use crate::transfer::{sigma_sets, triple_signature, SignClass};

use super::compile::Compiled;
use super::machine::Machine;
use super::structure::Structure;
use super::{EvalError, EvalOptions, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum CountMode {
    Exhaustive,
    /// `samples` uniform points; point `i` is drawn from stream `i` of the
    /// generator seeded with `seed`.
    Sample { seed: u64, samples: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hits: Option<u64>,
}

fn slots_for(v: &VirtualSet) -> Vec<Var> {
    let mut free = v.params().to_vec();
    free.extend(v.signature().iter().cloned());
    free
}

fn check_params(v: &VirtualSet, params: &[u32]) -> Result<(), EvalError> {
    if params.len() != v.params().len() {
        return Err(EvalError::Arity {
            expected: v.params().len(),
            found: params.len(),
        });
    }
    Ok(())
}

/// Number of points of `v` (with parameters set to `params`).
pub fn count_points(
    s: &Structure,
    v: &VirtualSet,
    params: &[u32],
    mode: CountMode,
    opts: &EvalOptions,
) -> Result<CountResult, EvalError> {
    check_params(v, params)?;
    match mode {
        CountMode::Exhaustive => {
            let count = match opts.strategy {
                Strategy::Guided => count_guided(s, v, params, opts)?,
                Strategy::Naive => count_naive(s, v, params, opts, 64)?,
            };
            Ok(CountResult {
                count: Some(count),
                estimate: None,
                stderr: None,
                hits: None,
            })
        }
        CountMode::Sample { seed, samples } => sample(s, v, params, seed, samples, opts),
    }
}

fn count_guided(s: &Structure, v: &VirtualSet, params: &[u32], opts: &EvalOptions) -> Result<u64, EvalError> {
    let c = Compiled::for_points(s, v.body(), &slots_for(v), v.arity(), false)?;
    let mut m = Machine::new(&c, opts);
    m.env[..params.len()].copy_from_slice(params);
    let (_, plan) = c.point_plan.as_ref().expect("planned");
    let mut n = 0u64;
    m.run(plan, 0, &mut |_| {
        n += 1;
        Ok(false)
    })?;
    Ok(n * (s.size() as u64).pow(plan.dropped))
}

/// Exhaustive count split into `chunks` contiguous ranges of the point
/// space, evaluated in parallel.
pub(crate) fn count_naive(
    s: &Structure,
    v: &VirtualSet,
    params: &[u32],
    opts: &EvalOptions,
    chunks: u64,
) -> Result<u64, EvalError> {
    let c = Compiled::new(s, v.body(), &slots_for(v))?;
    let size = s.size() as u64;
    let total = (size as f64).powi(v.arity() as i32);
    let needed = total * c.naive_cost().max(1.0);
    if needed > opts.budget as f64 {
        return Err(EvalError::BudgetExceeded {
            needed,
            budget: opts.budget,
        });
    }
    let total = total as u64;
    let chunk = total.div_ceil(chunks.max(1)).max(1);
    let offset = params.len();
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let counts = starts
        .par_iter()
        .map(|&lo| -> Result<u64, EvalError> {
            let hi = (lo + chunk).min(total);
            let mut m = Machine::new(&c, opts);
            m.env[..offset].copy_from_slice(params);
            let mut n = 0;
            for idx in lo..hi {
                let mut rest = idx;
                for j in 0..v.arity() {
                    m.env[offset + j] = (rest % size) as u32;
                    rest /= size;
                }
                if m.eval(c.root)? {
                    n += 1;
                }
            }
            Ok(n)
        })
        .collect::<Result<Vec<u64>, _>>()?;
    Ok(counts.into_iter().sum())
}

/// The `i`-th sampled point: uniform over the domain product, from stream
/// `i` of the generator seeded by `seed`.
pub fn sample_point(s: &Structure, arity: usize, seed: u64, i: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    (0..arity).map(|_| rng.gen_range(0..s.size())).collect()
}

fn sample(
    s: &Structure,
    v: &VirtualSet,
    params: &[u32],
    seed: u64,
    samples: u64,
    opts: &EvalOptions,
) -> Result<CountResult, EvalError> {
    if samples == 0 {
        return Err(EvalError::Arity { expected: 1, found: 0 });
    }
    let c = Compiled::new(s, v.body(), &slots_for(v))?;
    let hits = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<u64, EvalError> {
            let mut values = params.to_vec();
            values.extend(sample_point(s, v.arity(), seed, i));
            Ok(c.eval(&values, opts)? as u64)
        })
        .collect::<Result<Vec<u64>, _>>()?
        .into_iter()
        .sum::<u64>();
    let total = (s.size() as f64).powi(v.arity() as i32);
    let frac = hits as f64 / samples as f64;
    Ok(CountResult {
        count: None,
        estimate: Some(total * frac),
        stderr: Some(total * (frac * (1.0 - frac) / samples as f64).sqrt()),
        hits: Some(hits),
    })
}

/// All points of `v`, in the deterministic order of the guided plan.
pub fn enumerate_points(
    s: &Structure,
    v: &VirtualSet,
    params: &[u32],
    opts: &EvalOptions,
) -> Result<Vec<Vec<u32>>, EvalError> {
    check_params(v, params)?;
    let c = Compiled::for_points(s, v.body(), &slots_for(v), v.arity(), true)?;
    let mut m = Machine::new(&c, opts);
    m.env[..params.len()].copy_from_slice(params);
    let (slots, plan) = c.point_plan.as_ref().expect("planned");
    let mut out = Vec::new();
    m.run(plan, 0, &mut |m| {
        out.push(slots.iter().map(|&s| m.env[s as usize]).collect());
        Ok(false)
    })?;
    out.sort();
    Ok(out)
}

/// Compiled sign sets of one triple.
pub struct Classifier<'s> {
    triple: TripleSpec,
    glreg: bool,
    domain: Compiled<'s>,
    sets: [(SignClass, Compiled<'s>); 3],
}

impl<'s> Classifier<'s> {
    pub fn new(s: &'s Structure, t: &TripleSpec, glreg: bool) -> Result<Classifier<'s>, EvalError> {
        let sig = sigma_sets(t, glreg);
        let free = triple_signature(t);
        let compile = |v: &VirtualSet| Compiled::new(s, v.body(), &free);
        Ok(Classifier {
            triple: *t,
            glreg,
            domain: compile(&sig.domain)?,
            sets: [
                (SignClass::Minus, compile(&sig.minus)?),
                (SignClass::Zero, compile(&sig.zero)?),
                (SignClass::Plus, compile(&sig.plus)?),
            ],
        })
    }

    pub fn triple(&self) -> &TripleSpec {
        &self.triple
    }

    pub fn glreg(&self) -> bool {
        self.glreg
    }

    /// Number of entries in a point (`x`, `y`, `z` flattened row-major).
    pub fn arity(&self) -> usize {
        self.domain.free_vars().len()
    }

    pub fn in_domain(&self, point: &[u32], opts: &EvalOptions) -> Result<bool, EvalError> {
        self.domain.eval(point, opts)
    }

    /// The unique sign set containing the point.
    pub fn classify(&self, point: &[u32], opts: &EvalOptions) -> Result<SignClass, EvalError> {
        if !self.in_domain(point, opts)? {
            return Err(EvalError::NotInDomain);
        }
        let mut hits = Vec::new();
        for (class, c) in &self.sets {
            if c.eval(point, opts)? {
                hits.push(*class);
            }
        }
        match hits.len() {
            1 => Ok(hits[0]),
            0 => Err(EvalError::NoSignSet),
            _ => Err(EvalError::PartitionViolation(hits)),
        }
    }
}

/// One-shot classification; compiles the sign sets on every call.
pub fn classify(
    s: &Structure,
    t: &TripleSpec,
    point: &[u32],
    glreg: bool,
    opts: &EvalOptions,
) -> Result<SignClass, EvalError> {
    Classifier::new(s, t, glreg)?.classify(point, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::lefschetz;
    use crate::lie::Family;

    #[test]
    fn affine_plane() {
        let f3 = Structure::prime(3).unwrap();
        let r = count_points(&f3, &lefschetz(2), &[], CountMode::Exhaustive, &EvalOptions::guided()).unwrap();
        assert_eq!(r.count, Some(9));
        let r = count_points(&f3, &lefschetz(2), &[], CountMode::Exhaustive, &EvalOptions::naive()).unwrap();
        assert_eq!(r.count, Some(9));
    }

    #[test]
    fn small_lie_algebras() {
        let f3 = Structure::prime(3).unwrap();
        let so3 = Family::So(3).lie_algebra();
        for opts in [EvalOptions::naive(), EvalOptions::guided().validating()] {
            let r = count_points(&f3, &so3, &[], CountMode::Exhaustive, &opts).unwrap();
            assert_eq!(r.count, Some(27));
        }
        let f5 = Structure::prime(5).unwrap();
        let sp2 = Family::new_sp(2).unwrap().lie_algebra();
        let r = count_points(&f5, &sp2, &[], CountMode::Exhaustive, &EvalOptions::naive()).unwrap();
        assert_eq!(r.count, Some(125));
    }

    #[test]
    fn partition_of_work_does_not_matter() {
        let f3 = Structure::prime(3).unwrap();
        let gl = Family::Gl(2).regular_ss();
        let counts: Vec<u64> = [1, 7, 81]
            .iter()
            .map(|&k| count_naive(&f3, &gl, &[], &EvalOptions::naive(), k).unwrap())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn sampling_replays() {
        let f3 = Structure::prime(3).unwrap();
        let so2 = Family::So(2).lie_algebra();
        let mode = CountMode::Sample { seed: 42, samples: 2000 };
        let a = count_points(&f3, &so2, &[], mode, &EvalOptions::guided()).unwrap();
        let b = count_points(&f3, &so2, &[], mode, &EvalOptions::naive()).unwrap();
        assert_eq!(a, b);
        let est = a.estimate.unwrap();
        assert!((est - 3.0).abs() < 5.0 * a.stderr.unwrap());
    }

    #[test]
    fn enumerated_points_match_count() {
        let f3 = Structure::prime(3).unwrap();
        let sp2 = Family::new_sp(2).unwrap().lie_algebra();
        let pts = enumerate_points(&f3, &sp2, &[], &EvalOptions::guided()).unwrap();
        assert_eq!(pts.len(), 27);
        let c = Compiled::new(&f3, sp2.body(), sp2.signature()).unwrap();
        for p in &pts {
            assert!(c.eval(p, &EvalOptions::naive()).unwrap());
        }
    }
}
