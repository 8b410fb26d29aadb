//! Exact and modular verification of the sum identities against direct
//! product expansion. The modular path evaluates both sides at random points
//! over a large prime field, reading every shifted-factorial factor off
//! precomputed prefix-product tables; the exact path compares Laurent
//! polynomials bit for bit.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::analysis::dissect;
use crate::modular::{eval_mod, Fp};
use crate::poly::{LaurentPoly, Var};
use crate::qseries::{conj1_spec, expand_full, general_product_spec, ProductSpec};

use super::partitions::enumerate_partitions;
use super::qbinom::andrews_abc;
use super::theorem::{general_multisum, theorem_multisum, MultisumParams};
use super::MultisumError;

/// Outcome of one identity check, exact or modular.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub identity: String,
    pub mode: String,
    pub params: Value,
    pub pass: bool,
    pub witness: Value,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.identity,
            "mode": self.mode,
            "params": self.params,
            "status": if self.pass { "pass" } else { "fail" },
            "witness": self.witness,
        })
    }

    fn pass(identity: &str, mode: &str, params: Value, witness: Value) -> Self {
        VerifyReport { identity: identity.into(), mode: mode.into(), params, pass: true, witness }
    }

    fn fail(identity: &str, mode: &str, params: Value, witness: Value) -> Self {
        VerifyReport { identity: identity.into(), mode: mode.into(), params, pass: false, witness }
    }
}

// ---------------------------------------------------------------------------
// exact comparisons

/// Single sums vs the tri-split of the expanded m = 0 product, n = 0..=n_max.
pub fn verify_andrews_exact(n_max: u32) -> VerifyReport {
    let params = json!({"n_max": n_max});
    for n in 0..=n_max {
        let (a, b, c) = andrews_abc(n as usize);
        let f = expand_full(&conj1_spec(0, n)).to_bivariate();
        let (wa, wb, wc) = crate::analysis::tridissect_borwein(&f);
        for (name, got, want) in [("A", &a, &wa), ("B", &b, &wb), ("C", &c, &wc)] {
            if got != want {
                return VerifyReport::fail(
                    "andrews",
                    "exact",
                    params,
                    json!({"n": n, "component": name, "got": got.to_json(), "want": want.to_json()}),
                );
            }
        }
    }
    VerifyReport::pass("andrews", "exact", params, json!({"checked_n": n_max + 1}))
}

/// Multisum F^l vs the residue components of the expanded product, all l.
pub fn verify_theorem_exact(m: u32, n: u32) -> Result<VerifyReport, MultisumError> {
    let params = json!({"m": m, "n": n});
    let f = expand_full(&conj1_spec(m, n)).to_bivariate();
    let d = dissect(&f, 3);
    let want = [d.components[0].clone(), d.components[1].neg(), d.components[2].neg()];
    for l in 0..3u8 {
        let got = theorem_multisum(MultisumParams::new(m, n, l))?;
        if got != want[l as usize] {
            return Ok(VerifyReport::fail(
                "theorem",
                "exact",
                params,
                json!({"l": l, "got": got.to_json(), "want": want[l as usize].to_json()}),
            ));
        }
    }
    Ok(VerifyReport::pass("theorem", "exact", params, json!({"checked_l": [0, 1, 2]})))
}

/// Sum lemma at one (n_vars, N): trivariate sum vs direct product.
pub fn verify_lemma_exact(n_vars: u32, big_n: u32) -> Result<VerifyReport, MultisumError> {
    let params = json!({"n_vars": n_vars, "N": big_n});
    let lhs = super::kaneko::kaneko_product_lhs(n_vars, big_n);
    let rhs = super::kaneko::kaneko_sum_rhs(n_vars, big_n)?;
    if lhs == rhs {
        Ok(VerifyReport::pass("lemma", "exact", params, json!({"terms": lhs.num_terms()})))
    } else {
        Ok(VerifyReport::fail(
            "lemma",
            "exact",
            params,
            json!({"lhs": lhs.to_json(), "rhs": rhs.to_json()}),
        ))
    }
}

/// General-(a, K) multisum vs direct expansion of its product.
pub fn verify_general_exact(m: u32, n: u32, a: u32, big_k: u32) -> Result<VerifyReport, MultisumError> {
    let params = json!({"m": m, "n": n, "a": a, "K": big_k});
    let spec = general_product_spec(m, n, a, big_k).map_err(MultisumError::BadParameters)?;
    let lhs = expand_full(&spec).to_bivariate();
    let rhs = general_multisum(m, n, a, big_k)?;
    if lhs == rhs {
        Ok(VerifyReport::pass("general", "exact", params, json!({"terms": lhs.num_terms()})))
    } else {
        Ok(VerifyReport::fail(
            "general",
            "exact",
            params,
            json!({"lhs": lhs.to_json(), "rhs": rhs.to_json()}),
        ))
    }
}

// ---------------------------------------------------------------------------
// modular machinery

/// Prefix products `table[a][r] = ∏_{s=1}^{r} (1 - x^a * y^(step*s))` mod p:
/// the value of the shifted factorial (x^a y^step; y^step)_r at a point.
struct PochTable {
    rows: Vec<Vec<u64>>,
}

impl PochTable {
    fn build(fp: &Fp, x0: u64, y0: u64, step: i64, max_a: usize, max_r: usize) -> Self {
        let ystep = fp.pow_signed(y0, step);
        let mut rows = Vec::with_capacity(max_a + 1);
        let mut xa = 1u64;
        for _ in 0..=max_a {
            let mut row = Vec::with_capacity(max_r + 1);
            row.push(1u64);
            let mut acc = 1u64;
            let mut ys = 1u64;
            for _ in 1..=max_r {
                ys = fp.mul(ys, ystep);
                acc = fp.mul(acc, fp.sub(1, fp.mul(xa, ys)));
                row.push(acc);
            }
            rows.push(row);
            xa = fp.mul(xa, x0);
        }
        PochTable { rows }
    }

    fn get(&self, a: i64, r: i64) -> u64 {
        debug_assert!(a >= 0 && r >= 0);
        self.rows[a as usize][r as usize]
    }
}

/// num/den value of the λ-summand shared by all the sum identities, at a
/// point with x-powers `xp` (the t-like variable) and the table built at the
/// same step. Returns None when a denominator factor vanishes.
fn lemma_term_value(
    fp: &Fp,
    table: &PochTable,
    xp: &[u64],
    ystep_pows: &[u64],
    big_n: i64,
    parts: &[i64],
) -> Option<u64> {
    let big_l = parts.len() as i64;
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            let g = (j - i) as i64;
            let d = parts[i] - parts[j];
            if d == 0 {
                continue; // cross numerator and denominator cancel
            }
            num = fp.mul(num, fp.sub(1, fp.mul(xp[g as usize], ystep_pows[d as usize])));
            // (x^{g+1}; y)_d = (1 - x^{g+1}) * table[g+1][d-1]
            num = fp.mul(num, fp.sub(1, xp[(g + 1) as usize]));
            num = fp.mul(num, table.get(g + 1, d - 1));
            den = fp.mul(den, fp.sub(1, xp[g as usize]));
            den = fp.mul(den, table.get(g - 1, d));
        }
    }
    for (i0, &li) in parts.iter().enumerate() {
        let i = i0 as i64 + 1;
        num = fp.mul(num, table.get(i - 1, 2 * big_n));
        den = fp.mul(den, table.get(i - 1, big_n - li));
        den = fp.mul(den, table.get(big_l - i, big_n + li));
    }
    if den == 0 {
        return None;
    }
    Some(fp.mul(num, fp.inv(den)))
}

fn tri(x: i64) -> i64 {
    x * (x + 1) / 2
}

fn term_monomial_data(parts: &[i64]) -> (i64, i64, i64) {
    // (weight, Σ(i-1)λ_i, ΣC(λ_i+1,2))
    let w: i64 = parts.iter().sum();
    let x: i64 = parts.iter().enumerate().map(|(i, &v)| i as i64 * v).sum();
    let y: i64 = parts.iter().map(|&v| tri(v)).sum();
    (w, x, y)
}

fn draw_nonzero(fp: &Fp, rng: &mut ChaCha8Rng) -> u64 {
    rng.gen_range(1..fp.prime)
}

/// Tracks redraws caused by vanishing denominators.
struct DegenerateCounter {
    draws: u64,
    degenerate: u64,
}

impl DegenerateCounter {
    fn new() -> Self {
        DegenerateCounter { draws: 0, degenerate: 0 }
    }

    /// Record a degenerate draw; errors once >90% of a meaningful sample
    /// of draws has been discarded.
    fn record(&mut self, trials: u32) -> Result<(), MultisumError> {
        self.degenerate += 1;
        if self.draws >= (10 * trials as u64).max(100) && self.degenerate * 10 > self.draws * 9 {
            return Err(MultisumError::DegenerateSampling);
        }
        Ok(())
    }
}

/// Value of a binomial-factor product at (p0, q0).
fn eval_product_spec(fp: &Fp, spec: &ProductSpec, p0: u64, q0: u64) -> u64 {
    let mut acc = 1u64;
    for f in &spec.factors {
        let v = fp.mul(fp.pow_signed(p0, f.p_exp), fp.pow_signed(q0, f.q_exp));
        acc = fp.mul(acc, fp.sub(1, v));
    }
    acc
}

/// Modular check of the trivariate sum lemma at (n_vars, N).
pub fn verify_lemma_modular(
    n_vars: u32,
    big_n: u32,
    trials: u32,
    prime: u64,
    seed: u64,
) -> Result<VerifyReport, MultisumError> {
    verify_lemma_modular_inner(n_vars, big_n, trials, prime, seed, false)
}

pub(crate) fn verify_lemma_modular_inner(
    n_vars: u32,
    big_n: u32,
    trials: u32,
    prime: u64,
    seed: u64,
    perturb: bool,
) -> Result<VerifyReport, MultisumError> {
    assert!(trials >= 1);
    let fp = Fp::new(prime);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = json!({"n_vars": n_vars, "N": big_n, "trials": trials, "prime": prime});
    let nn = big_n as i64;
    let lams = enumerate_partitions(n_vars as usize, nn, None);
    let mut counter = DegenerateCounter::new();
    let mut done = 0u32;
    while done < trials {
        counter.draws += 1;
        let z0 = draw_nonzero(&fp, &mut rng);
        let q0 = draw_nonzero(&fp, &mut rng);
        let t0 = draw_nonzero(&fp, &mut rng);

        // LHS: the product, directly
        let mut lhs = 1u64;
        let zinv = fp.inv(z0);
        for i in 1..=n_vars as i64 {
            for s in 0..nn {
                let a = fp.mul(z0, fp.mul(fp.pow_signed(t0, 1 - i), fp.pow_signed(q0, s)));
                let b = fp.mul(zinv, fp.mul(fp.pow_signed(q0, 1 + s), fp.pow_signed(t0, i - 1)));
                lhs = fp.mul(lhs, fp.mul(fp.sub(1, a), fp.sub(1, b)));
            }
        }

        // RHS: the λ-sum from tables
        let table = PochTable::build(&fp, t0, q0, 1, n_vars as usize + 1, 2 * big_n as usize);
        let mut tpow = vec![1u64; n_vars as usize + 2];
        for i in 1..tpow.len() {
            tpow[i] = fp.mul(tpow[i - 1], t0);
        }
        let mut qpow = vec![1u64; 2 * big_n as usize + 1];
        for i in 1..qpow.len() {
            qpow[i] = fp.mul(qpow[i - 1], q0);
        }
        let mut rhs = 0u64;
        let mut bad = false;
        for (idx, lam) in lams.iter().enumerate() {
            let parts = lam.parts();
            let Some(frac) = lemma_term_value(&fp, &table, &tpow, &qpow, nn, parts) else {
                bad = true;
                break;
            };
            let (w, x, y) = term_monomial_data(parts);
            // (-z^{-1})^{|λ|} q^{ΣC} t^{Σ(i-1)λ}
            let mut v = frac;
            v = fp.mul(v, fp.pow_signed(q0, y));
            v = fp.mul(v, fp.pow_signed(t0, x));
            v = fp.mul(v, fp.pow_signed(z0, -w));
            let mut negate = w.rem_euclid(2) == 1;
            if perturb && idx == lams.len() / 2 {
                negate = !negate;
            }
            rhs = if negate { fp.sub(rhs, v) } else { fp.add(rhs, v) };
        }
        if bad {
            counter.record(trials)?;
            continue;
        }
        if lhs != rhs {
            return Ok(VerifyReport::fail(
                "lemma",
                "modular",
                params,
                json!({"point": {"z": z0, "q": q0, "t": t0}, "lhs": lhs, "rhs": rhs}),
            ));
        }
        done += 1;
    }
    Ok(VerifyReport::pass("lemma", "modular", params, json!({"trials": trials})))
}

/// Modular check of the F^l multisums against the product split into its
/// three residue components at a point, using a cube root of unity.
pub fn verify_theorem_modular(
    m: u32,
    n: u32,
    trials: u32,
    prime: u64,
    seed: u64,
) -> Result<VerifyReport, MultisumError> {
    verify_theorem_modular_inner(m, n, trials, prime, seed, false)
}

pub(crate) fn verify_theorem_modular_inner(
    m: u32,
    n: u32,
    trials: u32,
    prime: u64,
    seed: u64,
    perturb: bool,
) -> Result<VerifyReport, MultisumError> {
    assert!(trials >= 1);
    let fp = Fp::new(prime);
    let omega = fp.cube_root_of_unity().ok_or_else(|| {
        MultisumError::BadParameters(crate::qseries::QSeriesError::BadParameters(format!(
            "prime {prime} has no primitive cube root of unity (need prime ≡ 1 mod 3)"
        )))
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = json!({"m": m, "n": n, "trials": trials, "prime": prime});
    let spec = conj1_spec(m, n);
    let big_l = 2 * m as usize + 1;
    let nn = n as i64;
    let mi = m as i64;
    let lams = enumerate_partitions(big_l, nn, None);
    let mut counter = DegenerateCounter::new();
    let mut done = 0u32;
    while done < trials {
        counter.draws += 1;
        let p0 = draw_nonzero(&fp, &mut rng);
        let q0 = draw_nonzero(&fp, &mut rng);
        let q3 = fp.pow(q0, 3);
        if q3 == 1 {
            // F^l cannot be separated when q0^3 = 1
            counter.record(trials)?;
            continue;
        }

        // split the product value into residue components:
        // f(p, ω^j q) = c0 + c1 ω^j + c2 ω^{2j} with c_l = (∓ q^l) F^l(p, q^3)
        let w2 = fp.mul(omega, omega);
        let f0 = eval_product_spec(&fp, &spec, p0, q0);
        let f1 = eval_product_spec(&fp, &spec, p0, fp.mul(omega, q0));
        let f2 = eval_product_spec(&fp, &spec, p0, fp.mul(w2, q0));
        let inv3 = fp.inv(3 % prime);
        let c0 = fp.mul(inv3, fp.add(f0, fp.add(f1, f2)));
        let c1 = fp.mul(inv3, fp.add(f0, fp.add(fp.mul(w2, f1), fp.mul(omega, f2))));
        let c2 = fp.mul(inv3, fp.add(f0, fp.add(fp.mul(omega, f1), fp.mul(w2, f2))));
        let want = [
            c0,
            fp.sub(0, fp.mul(c1, fp.inv(q0))),
            fp.sub(0, fp.mul(c2, fp.inv(fp.pow(q0, 2)))),
        ];

        // multisum values of all three components in one pass over λ
        let table = PochTable::build(&fp, p0, q3, 1, big_l + 1, 2 * n as usize);
        let mut ppow = vec![1u64; big_l + 2];
        for i in 1..ppow.len() {
            ppow[i] = fp.mul(ppow[i - 1], p0);
        }
        let mut q3pow = vec![1u64; 2 * n as usize + 1];
        for i in 1..q3pow.len() {
            q3pow[i] = fp.mul(q3pow[i - 1], q3);
        }
        let mut sums = [0u64; 3];
        let mut bad = false;
        for (idx, lam) in lams.iter().enumerate() {
            let parts = lam.parts();
            let Some(frac) = lemma_term_value(&fp, &table, &ppow, &q3pow, nn, parts) else {
                bad = true;
                break;
            };
            let (w, x, y) = term_monomial_data(parts);
            let l = (-w).rem_euclid(3) as usize;
            let mut v = frac;
            v = fp.mul(v, fp.pow_signed(p0, x - mi * w));
            v = fp.mul(v, fp.pow_signed(q3, y - (w + l as i64) / 3));
            let mut negate = w.rem_euclid(2) == 1;
            if perturb && idx == lams.len() / 2 {
                negate = !negate;
            }
            sums[l] = if negate { fp.sub(sums[l], v) } else { fp.add(sums[l], v) };
        }
        if bad {
            counter.record(trials)?;
            continue;
        }
        let pre = fp.mul(
            fp.pow_signed(p0, mi * (mi + 1) * nn),
            fp.pow_signed(q3, -mi * nn * nn),
        );
        for l in 0..3usize {
            let sign_neg = (l * (l + 1) / 2) % 2 == 1;
            let mut got = fp.mul(pre, sums[l]);
            if sign_neg {
                got = fp.sub(0, got);
            }
            if got != want[l] {
                return Ok(VerifyReport::fail(
                    "theorem",
                    "modular",
                    params,
                    json!({"point": {"p": p0, "q": q0}, "l": l, "lhs": want[l], "rhs": got}),
                ));
            }
        }
        done += 1;
    }
    Ok(VerifyReport::pass("theorem", "modular", params, json!({"trials": trials})))
}

/// Modular check of the general-(a, K) multisum against its product.
pub fn verify_general_modular(
    m: u32,
    n: u32,
    a: u32,
    big_k: u32,
    trials: u32,
    prime: u64,
    seed: u64,
) -> Result<VerifyReport, MultisumError> {
    assert!(trials >= 1);
    let fp = Fp::new(prime);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = json!({"m": m, "n": n, "a": a, "K": big_k, "trials": trials, "prime": prime});
    let spec = general_product_spec(m, n, a, big_k).map_err(MultisumError::BadParameters)?;
    let step = 2 * big_k as i64 + 1;
    let big_l = 2 * m as usize + 1;
    let nn = n as i64;
    let mi = m as i64;
    let lams = enumerate_partitions(big_l, nn, None);
    let mut counter = DegenerateCounter::new();
    let mut done = 0u32;
    while done < trials {
        counter.draws += 1;
        let p0 = draw_nonzero(&fp, &mut rng);
        let q0 = draw_nonzero(&fp, &mut rng);
        let lhs = eval_product_spec(&fp, &spec, p0, q0);

        let qstep = fp.pow(q0, step as u64);
        let table = PochTable::build(&fp, p0, q0, step, big_l + 1, 2 * n as usize);
        let mut ppow = vec![1u64; big_l + 2];
        for i in 1..ppow.len() {
            ppow[i] = fp.mul(ppow[i - 1], p0);
        }
        let mut qspow = vec![1u64; 2 * n as usize + 1];
        for i in 1..qspow.len() {
            qspow[i] = fp.mul(qspow[i - 1], qstep);
        }
        let mut rhs = 0u64;
        let mut bad = false;
        for lam in &lams {
            let parts = lam.parts();
            let Some(frac) = lemma_term_value(&fp, &table, &ppow, &qspow, nn, parts) else {
                bad = true;
                break;
            };
            let (w, x, y) = term_monomial_data(parts);
            let mut v = frac;
            v = fp.mul(v, fp.pow_signed(p0, x - mi * w));
            v = fp.mul(v, fp.pow_signed(q0, step * y - a as i64 * w));
            if w.rem_euclid(2) == 1 {
                rhs = fp.sub(rhs, v);
            } else {
                rhs = fp.add(rhs, v);
            }
        }
        if bad {
            counter.record(trials)?;
            continue;
        }
        let pre = fp.mul(
            fp.pow_signed(p0, mi * (mi + 1) * nn),
            fp.pow_signed(q0, -step * mi * nn * nn),
        );
        let rhs = fp.mul(pre, rhs);
        if lhs != rhs {
            return Ok(VerifyReport::fail(
                "general",
                "modular",
                params,
                json!({"point": {"p": p0, "q": q0}, "lhs": lhs, "rhs": rhs}),
            ));
        }
        done += 1;
    }
    Ok(VerifyReport::pass("general", "modular", params, json!({"trials": trials})))
}

/// Modular check that two Laurent polynomials agree at random points;
/// used to compare andrews components modularly.
pub fn verify_polys_modular(
    identity: &str,
    lhs: &LaurentPoly,
    rhs: &LaurentPoly,
    trials: u32,
    prime: u64,
    seed: u64,
) -> Result<VerifyReport, MultisumError> {
    assert!(trials >= 1);
    let fp = Fp::new(prime);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = json!({"trials": trials, "prime": prime});
    let mut vars: Vec<Var> = lhs.vars().to_vec();
    for &v in rhs.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    for _ in 0..trials {
        let point: BTreeMap<Var, u64> = vars.iter().map(|&v| (v, draw_nonzero(&fp, &mut rng))).collect();
        let a = eval_mod(lhs, &point, prime).expect("nonzero point");
        let b = eval_mod(rhs, &point, prime).expect("nonzero point");
        if a != b {
            let pt: BTreeMap<&str, u64> = point.iter().map(|(v, &x)| (v.name(), x)).collect();
            return Ok(VerifyReport::fail(
                identity,
                "modular",
                params,
                json!({"point": pt, "lhs": a, "rhs": b}),
            ));
        }
    }
    Ok(VerifyReport::pass(identity, "modular", params, json!({"trials": trials})))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::default_prime;

    #[test]
    fn lemma_modular_small() {
        let r = verify_lemma_modular(2, 2, 5, default_prime(), 42).unwrap();
        assert!(r.pass, "{:?}", r.witness);
        let r = verify_lemma_modular(3, 3, 5, default_prime(), 43).unwrap();
        assert!(r.pass, "{:?}", r.witness);
    }

    #[test]
    fn theorem_modular_small() {
        for (m, n) in [(0u32, 3u32), (1, 2), (2, 2)] {
            let r = verify_theorem_modular(m, n, 4, default_prime(), 7).unwrap();
            assert!(r.pass, "m={} n={}: {:?}", m, n, r.witness);
        }
    }

    #[test]
    fn general_modular_small() {
        for (m, n, a, k) in [(1u32, 2u32, 1u32, 1u32), (1, 2, 2, 2), (2, 1, 3, 3)] {
            let r = verify_general_modular(m, n, a, k, 4, default_prime(), 11).unwrap();
            assert!(r.pass, "m={} n={} a={} K={}: {:?}", m, n, a, k, r.witness);
        }
    }

    #[test]
    fn planted_bug_is_caught() {
        let r = verify_lemma_modular_inner(2, 2, 20, default_prime(), 5, true).unwrap();
        assert!(!r.pass);
        let r = verify_theorem_modular_inner(1, 2, 20, default_prime(), 5, true).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn exact_reports() {
        let r = verify_andrews_exact(5);
        assert!(r.pass);
        let r = verify_theorem_exact(1, 2).unwrap();
        assert!(r.pass);
        let r = verify_lemma_exact(2, 2).unwrap();
        assert!(r.pass);
        let r = verify_general_exact(1, 1, 2, 2).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn poly_modular_check() {
        let (a, _, _) = crate::multisum::qbinom::andrews_abc(4);
        let r = verify_polys_modular("andrews", &a, &a, 3, default_prime(), 1).unwrap();
        assert!(r.pass);
    }
}
