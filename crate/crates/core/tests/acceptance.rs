//! End-to-end acceptance gate. Each test covers one numbered criterion and
//! prints a single `acceptance N (...): pass|FAIL` line (visible with
//! `--nocapture`); a FAIL line is followed by a panic so `cargo test`
//! reports it.

use num_bigint::BigInt;

use borwein_lab_core::analysis::{
    check_iks_even, check_pattern_slice, dissect, reproduce_counterexamples, threshold_row,
    tridissect_borwein, ThresholdProduct,
};
use borwein_lab_core::modular::default_prime;
use borwein_lab_core::multisum::{
    andrews_abc, theorem_multisum, verify_lemma_exact, verify_lemma_modular,
    verify_theorem_modular, MultisumParams,
};
use borwein_lab_core::poly::{LaurentPoly, Var};
use borwein_lab_core::qseries::{conj1_spec, conj3_spec, expand_full, expand_with_jobs, iks_spec};

fn report(number: u32, name: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("acceptance {number} ({name}): pass"),
        Err(msg) => {
            println!("acceptance {number} ({name}): FAIL — {msg}");
            panic!("acceptance criterion {number} ({name}) failed: {msg}");
        }
    }
}

const TABLE_ROW_M1: [Option<u32>; 16] =
    [Some(0), Some(0), Some(0), Some(0), Some(0), Some(2), Some(2), Some(2), Some(2), Some(3), Some(3), Some(3), Some(3), Some(4), Some(4), Some(4)];
const TABLE_ROW_M2: [Option<u32>; 16] =
    [Some(0), Some(0), Some(0), Some(5), Some(5), Some(8), Some(8), Some(11), Some(12), Some(14), Some(15), Some(17), Some(18), Some(20), Some(21), Some(23)];

fn computed_row(m: u32) -> Vec<Option<u32>> {
    threshold_row(m, 15, 25, 1, ThresholdProduct::Conj1)
        .into_iter()
        .map(|r| r.n_threshold)
        .collect()
}

#[test]
fn criterion_01_threshold_table() {
    let check = || -> Result<(), String> {
        for (m, want) in [(1u32, &TABLE_ROW_M1), (2, &TABLE_ROW_M2), (3, &TABLE_ROW_M2)] {
            let got = computed_row(m);
            if got != want.to_vec() {
                return Err(format!("row m={m}: got {got:?}, want {want:?}"));
            }
        }
        Ok(())
    };
    report(1, "threshold table m=1..3, k=0..15, ceiling 25", check());
}

#[test]
fn criterion_02_closed_form_thresholds() {
    let check = || -> Result<(), String> {
        let got = computed_row(1);
        for (k, g) in got.iter().enumerate() {
            let want = if k <= 4 { 0 } else { (k as u32).div_ceil(4) };
            if *g != Some(want) {
                return Err(format!("k={k}: got {g:?}, want {want}"));
            }
        }
        Ok(())
    };
    report(2, "closed-form thresholds for the m=1 row", check());
}

#[test]
fn criterion_03_single_sum_tridissection() {
    let check = || -> Result<(), String> {
        for n in 0..=30u32 {
            let (a, b, c) = andrews_abc(n as usize);
            let f = expand_full(&conj1_spec(0, n)).to_bivariate();
            let (wa, wb, wc) = tridissect_borwein(&f);
            for (name, got, want) in [("A", a, wa), ("B", b, wb), ("C", c, wc)] {
                if got != want {
                    return Err(format!("component {name} mismatch at n={n}"));
                }
            }
        }
        Ok(())
    };
    report(3, "single-sum A,B,C equal the tridissection for n<=30", check());
}

#[test]
fn criterion_04_multisum_identity() {
    let check = || -> Result<(), String> {
        // exact, m <= 2, n <= 5, all l
        for m in 0..=2u32 {
            for n in 1..=5u32 {
                let f = expand_full(&conj1_spec(m, n)).to_bivariate();
                let d = dissect(&f, 3);
                let want =
                    [d.components[0].clone(), d.components[1].neg(), d.components[2].neg()];
                for l in 0..3u8 {
                    let got = theorem_multisum(MultisumParams::new(m, n, l))
                        .map_err(|e| format!("m={m} n={n} l={l}: {e}"))?;
                    if got != want[l as usize] {
                        return Err(format!("exact mismatch at m={m} n={n} l={l}"));
                    }
                }
            }
        }
        // modular, m <= 3, n <= 8, 20 trials at a 62-bit prime
        let prime = default_prime();
        for m in 0..=3u32 {
            for n in 1..=8u32 {
                let rep = verify_theorem_modular(m, n, 20, prime, 0xACCE9704)
                    .map_err(|e| format!("m={m} n={n}: {e}"))?;
                if !rep.pass {
                    return Err(format!("modular mismatch at m={m} n={n}: {}", rep.witness));
                }
            }
        }
        Ok(())
    };
    report(4, "multisum vs dissected product, exact and modular", check());
}

#[test]
fn criterion_05_principal_specialization_identity() {
    let check = || -> Result<(), String> {
        for n_vars in 1..=3u32 {
            for big_n in 0..=3u32 {
                let rep = verify_lemma_exact(n_vars, big_n)
                    .map_err(|e| format!("n_vars={n_vars} N={big_n}: {e}"))?;
                if !rep.pass {
                    return Err(format!("exact mismatch at n_vars={n_vars} N={big_n}"));
                }
            }
        }
        let prime = default_prime();
        for n_vars in 1..=5u32 {
            for big_n in 0..=5u32 {
                let rep = verify_lemma_modular(n_vars, big_n, 20, prime, 0xACCE9705)
                    .map_err(|e| format!("n_vars={n_vars} N={big_n}: {e}"))?;
                if !rep.pass {
                    return Err(format!("modular mismatch at n_vars={n_vars} N={big_n}"));
                }
            }
        }
        Ok(())
    };
    report(5, "product/sum identity, exact and modular", check());
}

#[test]
fn criterion_06_polynomiality_in_p() {
    let check = || -> Result<(), String> {
        for m in 0..=2u32 {
            for n in 1..=5u32 {
                for l in 0..3u8 {
                    let f = theorem_multisum(MultisumParams::new(m, n, l))
                        .map_err(|e| format!("m={m} n={n} l={l}: {e}"))?;
                    let Some(range) = f.exponent_range(Var::P) else {
                        if m == 0 {
                            continue; // constant in p
                        }
                        return Err(format!("m={m} n={n} l={l}: no p-support"));
                    };
                    if range.min < 0 {
                        return Err(format!(
                            "m={m} n={n} l={l}: negative p-exponent {}",
                            range.min
                        ));
                    }
                    let want = 2 * (m as i64) * (m as i64 + 1) * n as i64;
                    if range.max != want {
                        return Err(format!(
                            "m={m} n={n} l={l}: p-degree {}, want {want}",
                            range.max
                        ));
                    }
                }
            }
        }
        Ok(())
    };
    report(6, "p-polynomiality and exact p-degree 2m(m+1)n", check());
}

#[test]
fn criterion_07_reversal_symmetry() {
    let check = || -> Result<(), String> {
        for m in 0..=2u32 {
            for n in 1..=6u32 {
                let spec = conj1_spec(m, n);
                let kmax = spec.p_degree_bound().max(0) as usize;
                let series = expand_with_jobs(&spec, kmax, 1);
                let shift = (n as i64) * (n as i64) - 1;
                for k in 0..=kmax {
                    let (_a, b, c) = tridissect_borwein(series.slice(k));
                    let reversed = LaurentPoly::monomial(1, &[(Var::Q, shift)])
                        .mul(&b.substitute_power(Var::Q, -1).unwrap());
                    if reversed != c {
                        return Err(format!("m={m} n={n} k={k}: q^(n^2-1) B(1/q) != C(q)"));
                    }
                }
            }
        }
        Ok(())
    };
    report(7, "reversal symmetry between the B and C components", check());
}

#[test]
fn criterion_08_counterexamples() {
    let check = || -> Result<(), String> {
        let rep = reproduce_counterexamples();
        if rep.yee_violations.is_empty() {
            return Err("no sign violation found in the p^40 slice".into());
        }
        if rep.iks_stable_coeff != Some(BigInt::from(1)) {
            return Err(format!(
                "p^18 q^26 coefficient did not stabilize at +1: {:?}",
                rep.iks_stable_coeff
            ));
        }
        Ok(())
    };
    report(8, "both published counterexamples reproduce", check());
}

#[test]
fn criterion_09_even_modulus_pattern() {
    let check = || -> Result<(), String> {
        let gcd = |mut a: u32, mut b: u32| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        for big_k in [2u32, 4, 6, 8, 10, 12] {
            for a in 1..big_k.div_ceil(2) {
                if 2 * a >= big_k || gcd(a, big_k) != 1 {
                    continue;
                }
                for n in 0..=8u32 {
                    let spec = iks_spec(a, big_k, n)
                        .map_err(|e| format!("a={a} K={big_k} n={n}: {e}"))?;
                    let f = expand_with_jobs(&spec, 0, 1).slice(0).clone();
                    let v = check_iks_even(&f);
                    if !v.is_empty() {
                        return Err(format!(
                            "a={a} K={big_k} n={n}: {} violations",
                            v.len()
                        ));
                    }
                }
            }
        }
        Ok(())
    };
    report(9, "even-modulus sign theorem on all valid (a, K<=12, n<=8)", check());
}

#[test]
fn criterion_10_general_grid_sanity() {
    // The sign pattern is conjectured for n large enough; the published
    // scan reran any failing cell at larger n and found every failure with
    // both m-parameters >= 1 to be transient. Mirror that procedure: a cell
    // (m1, m2, K, k) passes if the pattern holds at n = 5, or, failing
    // that, at all of n = 6, 7, 8.
    let check = || -> Result<(), String> {
        let mut transient = 0usize;
        for big_k in 2..=6u32 {
            for m1 in 2..=3u32 {
                for m2 in 2..=3u32 {
                    // largest failing n per k, scanning the grid plus the
                    // larger-n margin used for rerunning failures
                    let mut any_fail_at = [0u32; 11];
                    for n in 1..=8u32 {
                        let spec = conj3_spec(m1, m2, n, n, n, big_k);
                        let series = expand_with_jobs(&spec, 10, 1);
                        for k in 0..=10usize {
                            let v = check_pattern_slice(series.slice(k), big_k, k);
                            if !v.is_empty() {
                                any_fail_at[k] = n;
                            }
                        }
                    }
                    for k in 0..=10usize {
                        if any_fail_at[k] == 0 {
                            continue;
                        }
                        transient += 1;
                        if any_fail_at[k] > 5 {
                            return Err(format!(
                                "m1={m1} m2={m2} K={big_k} k={k}: violation persists to n={}",
                                any_fail_at[k]
                            ));
                        }
                    }
                }
            }
        }
        println!("  (criterion 10: {transient} cell(s) needed the larger-n rerun)");
        Ok(())
    };
    report(10, "no persistent sign violations on the systematic K=2..6 grid", check());
}
