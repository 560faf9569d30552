//! Seeded randomized dominance suites for the exponential-sum estimates and
//! the gcd-sum inequalities.

use crate::arith::{gcd_sums_within_bounds, gcd_weighted_sums, modulus_profile, tau};
use crate::characters::{postnikov_linear, postnikov_quadratic, CharacterGroup, DirichletCharacter};
use crate::error::{Error, Result};
use crate::expsums::{
    corput1_bound, corput2_rhs_squared, linear_exp_sum_bound, taylor_model_max, twisted_sum,
    wellspacing_bound, TaylorReduction,
};
use crate::numeric::special::cis_turns;
use crate::numeric::{ComplexSum, Dd};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Moduli of the random `(q, χ, t, N, L)` family.
pub const FAMILY_MODULI: [u64; 6] = [9, 27, 64, 81, 243, 729];
const RHO: f64 = 1.3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub trials: usize,
    pub violations: usize,
    /// `min (bound - lhs)`.
    pub worst_margin: f64,
    /// `max lhs / bound`.
    pub worst_ratio: f64,
    pub worst_case: String,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteResult>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(SuiteResult::pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            2
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!("lemma suites: seed = {}, trials = {}\n", self.seed, self.trials);
        let _ = writeln!(
            s,
            "{:<22} {:>7} {:>6} {:>14} {:>10}  worst case",
            "suite", "trials", "viol", "worst margin", "max ratio"
        );
        for r in &self.suites {
            let _ = writeln!(
                s,
                "{:<22} {:>7} {:>6} {:>14.6e} {:>10.6}  {}",
                r.name, r.trials, r.violations, r.worst_margin, r.worst_ratio, r.worst_case
            );
        }
        let _ = writeln!(s, "{}", if self.all_pass() { "PASS" } else { "FAIL" });
        s
    }
}

/// One evaluated trial: `lhs <= bound` is the claim.
struct Trial {
    lhs: f64,
    bound: f64,
    /// Verdict from an exact check, when one exists.
    exact: Option<bool>,
    case: String,
}

fn fold(name: &'static str, trials: Vec<Trial>) -> SuiteResult {
    let mut r = SuiteResult {
        name,
        trials: trials.len(),
        violations: 0,
        worst_margin: f64::INFINITY,
        worst_ratio: 0.0,
        worst_case: String::new(),
    };
    for t in trials {
        let margin = t.bound - t.lhs;
        if !t.exact.unwrap_or(margin >= 0.0) {
            r.violations += 1;
        }
        if !(margin >= r.worst_margin) {
            r.worst_margin = margin;
            r.worst_case = t.case;
        }
        if t.bound > 0.0 {
            r.worst_ratio = r.worst_ratio.max(t.lhs / t.bound);
        }
    }
    r
}

fn rng_for(seed: u64, suite: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ suite.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

fn dist_to_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn wellspacing_suite(seed: u64, trials: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 1);
    let cases: Vec<_> = (0..trials)
        .map(|_| {
            let p = log_uniform(&mut rng, 0.5, 60.0);
            let delta = log_uniform(&mut rng, 0.005, 2.0);
            let x = rng.gen_range(-20.0..20.0);
            let count = rng.gen_range(1..=200usize);
            let mut ys = vec![x + rng.gen_range(0.0..1.0)];
            for _ in 1..count {
                let gap = delta * (1.0 + rng.gen_range(0.0..3.0f64).powi(2));
                ys.push(ys[ys.len() - 1] + gap);
            }
            let y = ys[ys.len() - 1] + if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..2.0) };
            (p, delta, x, y, ys)
        })
        .collect();
    let out = cases
        .into_par_iter()
        .map(|(p, delta, x, y, ys)| {
            let lhs: f64 = ys
                .iter()
                .map(|&v| {
                    let d = dist_to_int(v);
                    if d == 0.0 {
                        p
                    } else {
                        p.min(1.0 / d)
                    }
                })
                .sum();
            Trial {
                lhs,
                bound: wellspacing_bound(p, delta, x, y),
                exact: None,
                case: format!("P={p:.4} δ={delta:.4} R={} [{x:.3},{y:.3}]", ys.len()),
            }
        })
        .collect();
    fold("wellspacing", out)
}

fn kusmin_landau_suite(seed: u64, trials: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 2);
    let cases: Vec<(f64, u64)> = (0..trials)
        .map(|_| {
            let k = log_uniform(&mut rng, 1.0, 20_000.0).round() as u64;
            let alpha = match rng.gen_range(0..3) {
                0 => rng.gen_range(0.0..1.0),
                1 => {
                    let e = 10f64.powf(-rng.gen_range(1.0..6.0));
                    rng.gen_range(-3i32..=3) as f64 + if rng.gen_bool(0.5) { e } else { -e }
                }
                _ => 0.5 + rng.gen_range(-0.01..0.01),
            };
            (alpha, k)
        })
        .collect();
    let out = cases
        .into_par_iter()
        .map(|(alpha, k)| {
            let a = Dd::from_f64(alpha);
            let mut s = ComplexSum::new();
            for j in 1..=k {
                s.add(cis_turns((a * Dd::from_u64(j)).frac()));
            }
            Trial {
                lhs: s.value().norm() - k as f64 * 2f64.powi(-48),
                bound: linear_exp_sum_bound(alpha, k),
                exact: None,
                case: format!("α={alpha:.9} K={k}"),
            }
        })
        .collect();
    fold("kusmin_landau_linear", out)
}

/// Nonprincipal characters per family modulus, filtered by `keep`.
fn family(keep: impl Fn(&DirichletCharacter) -> bool) -> Result<Vec<(u64, Vec<DirichletCharacter>)>> {
    FAMILY_MODULI
        .iter()
        .map(|&q| {
            let chars = CharacterGroup::new(q)?
                .characters()
                .into_iter()
                .filter(|c| !c.is_principal() && keep(c))
                .collect();
            Ok((q, chars))
        })
        .collect()
}

/// Random admissible `(N, L)` for the order-`j` reduction at `ρ = 1.3`.
fn admissible(rng: &mut ChaCha8Rng, red: &TaylorReduction, t: f64) -> (u64, u64) {
    let n = log_uniform(rng, 200.0, 200_000.0) as u64;
    let u_max = (t.abs().powf(-1.0 / (red.j + 1) as f64)).min(1.0);
    let l_max = 1 + ((n + 1) as f64 * u_max / (red.lambda * red.lambda)).floor() as u64;
    let mut l = rng.gen_range(1..=l_max.max(1));
    while l > 1 && !red.holds(t, n, l) {
        l -= 1;
    }
    (n, l)
}

struct SumCase {
    chi: DirichletCharacter,
    b: u64,
    t: f64,
    n: u64,
    l: u64,
    red: TaylorReduction,
}

impl SumCase {
    fn describe(&self) -> String {
        format!(
            "q={} χ#{} J={} t={:.3} N={} L={}",
            self.chi.modulus(),
            self.chi.index(),
            self.red.j,
            self.t,
            self.n,
            self.l
        )
    }
}

fn sum_cases(
    rng: &mut ChaCha8Rng,
    fam: &[(u64, Vec<DirichletCharacter>)],
    trials: usize,
    order: impl Fn(&mut ChaCha8Rng) -> u32,
    param: impl Fn(&DirichletCharacter) -> Result<u64>,
) -> Result<Vec<SumCase>> {
    let fam: Vec<_> = fam.iter().filter(|(_, c)| !c.is_empty()).collect();
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let (_, chars) = fam[rng.gen_range(0..fam.len())];
        let chi = chars[rng.gen_range(0..chars.len())].clone();
        let t = rng.gen_range(200.0..=2000.0);
        let red = TaylorReduction::for_rho(order(rng), RHO)?;
        let (n, l) = admissible(rng, &red, t);
        let b = param(&chi)?;
        out.push(SumCase { chi, b, t, n, l, red });
    }
    Ok(out)
}

fn taylor_suite(seed: u64, trials: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 3);
    let fam = family(|c| c.is_primitive())?;
    let cases = sum_cases(&mut rng, &fam, trials, |r| r.gen_range(0..=2), |_| Ok(0))?;
    let out = cases
        .into_par_iter()
        .map(|c| -> Result<Trial> {
            let (s, err) = twisted_sum(&c.chi, c.t, c.n, c.l)?;
            let model = taylor_model_max(&c.chi, c.t, c.n, c.l, c.red.j)?;
            Ok(Trial {
                lhs: s.norm() - err,
                bound: c.red.nu * (model + c.l as f64 * 2f64.powi(-48)),
                exact: None,
                case: c.describe(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold("taylor_reduction", out))
}

fn corput1_suite(
    name: &'static str,
    suite: u64,
    seed: u64,
    trials: usize,
    keep: impl Fn(&DirichletCharacter) -> bool,
) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, suite);
    let fam = family(keep)?;
    let cases = sum_cases(&mut rng, &fam, trials, |_| 1, |c| Ok(postnikov_linear(c)?.1))?;
    let out = cases
        .into_par_iter()
        .map(|c| -> Result<Trial> {
            let prof = modulus_profile(c.chi.modulus())?;
            let (s, err) = twisted_sum(&c.chi, c.t, c.n, c.l)?;
            Ok(Trial {
                lhs: s.norm() - err,
                bound: corput1_bound(&prof, c.b, &c.red, c.t, c.n, c.l)?,
                exact: None,
                case: format!("{} B1={}", c.describe(), c.b),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold(name, out))
}

fn corput2_suite(seed: u64, trials: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 5);
    let fam = family(|c| c.is_primitive())?;
    let cases = sum_cases(&mut rng, &fam, trials, |_| 2, |c| Ok(postnikov_quadratic(c)?.2))?;
    let out = cases
        .into_par_iter()
        .map(|c| -> Result<Trial> {
            let prof = modulus_profile(c.chi.modulus())?;
            let (s, err) = twisted_sum(&c.chi, c.t, c.n, c.l)?;
            let lhs = (s.norm() - err).max(0.0);
            Ok(Trial {
                lhs: lhs * lhs,
                bound: corput2_rhs_squared(&prof, c.b, prof.lambda_d, &c.red, c.t, c.n, c.l)?,
                exact: None,
                case: format!("{} B={}", c.describe(), c.b),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold("corput2", out))
}

fn gcd_sum_suite(seed: u64, trials: usize) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 6);
    let cases: Vec<(u64, u64)> = (0..trials)
        .map(|_| (rng.gen_range(1..=5000u64), rng.gen_range(1..=5000u64)))
        .collect();
    let out = cases
        .into_par_iter()
        .map(|(m, n)| -> Result<Trial> {
            let (s1, s2) = gcd_weighted_sums(m, n);
            let tn = tau(n)? as f64;
            let exact_ok = gcd_sums_within_bounds(m, n)?;
            let (b1, b2) = (tn * (m as f64).ln(), tn * m as f64);
            // report the tighter of the two inequalities
            let (lhs, bound) = if b1 - s1 < b2 - s2 { (s1, b1) } else { (s2, b2) };
            Ok(Trial {
                lhs,
                bound,
                exact: Some(exact_ok),
                case: format!("M={m} N={n}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold("gcd_sums", out))
}

/// Runs every suite with `trials` random instances each.
pub fn cmd_lemmas(seed: u64, trials: usize) -> Result<LemmaReport> {
    if trials == 0 {
        return Err(Error::Usage("trials must be at least 1".into()));
    }
    let suites = vec![
        wellspacing_suite(seed, trials),
        kusmin_landau_suite(seed, trials),
        taylor_suite(seed, trials)?,
        corput1_suite("corput1", 4, seed, trials, |c| c.is_primitive())?,
        corput1_suite("corput1_b1_eq_d1", 7, seed, trials, |c| {
            let d1 = modulus_profile(c.modulus()).map(|p| p.d1).unwrap_or(0);
            postnikov_linear(c).map(|(_, b1)| b1 == d1).unwrap_or(false)
        })?,
        corput2_suite(seed, trials)?,
        gcd_sum_suite(seed, trials)?,
    ];
    Ok(LemmaReport {
        seed,
        trials,
        suites,
    })
}
