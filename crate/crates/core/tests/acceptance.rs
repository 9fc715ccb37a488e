//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Every check is exact equality of rationals or residue sets.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ekmu::bundle::MilnorBundle;
use ekmu::exact::{ambiguous, reduce_mod_z, AmbiguousResidue, Rational, ResidueModZ};
use ekmu::quotient::{classify_quotient, mu_quotient, rp7_mu, rp7_sum_14m2_mu, Verdict};
use ekmu::verify::{
    brute_force_theorem, check_case, count_valid, crt_residues, enumerate_residues, mu_quotient_oracle,
    satisfies_congruence, CaseLabel, IntRange,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn theorem_reproduction() -> Check {
    let range = IntRange::inclusive(-100_000, 100_000).unwrap();
    let started = Instant::now();
    let mut checked = 0u64;
    let target = rp7_mu();
    for h in range.iter().filter(satisfies_congruence) {
        let mu = mu_quotient(&MilnorBundle::from_h(h.clone())).map_err(|e| e.to_string())?;
        ensure(mu == target, || format!("h = {h}: {mu}"))?;
        checked += 1;
    }
    let elapsed = started.elapsed();
    ensure(BigInt::from(checked) == count_valid(&range), || format!("checked {checked} values"))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}, limit 10s"))?;
    Ok(format!("{checked} valid h in [-1e5, 1e5], all {{1/32, 31/32}}, {:.2}s sequential", elapsed.as_secs_f64()))
}

fn residue_enumeration() -> Check {
    let base = enumerate_residues(56).unwrap();
    ensure(base.residues == [0, 1, 8, 49], || format!("mod 56: {:?}", base.residues))?;
    for m in 1..=100u64 {
        let modulus = 56 * m;
        let scan = enumerate_residues(modulus).unwrap();
        let crt = crt_residues(modulus).unwrap();
        ensure(scan == crt, || format!("scan and CRT disagree at modulus {modulus}"))?;
        ensure(scan.residues.len() as u64 == 4 * m, || format!("modulus {modulus}: {} residues", scan.residues.len()))?;
    }
    Ok("mod 56 = {0, 1, 8, 49}; scan == CRT for 56m, m = 1..100".into())
}

fn eells_kuiper_identity() -> Check {
    for h in -10_000i64..=10_000 {
        let b = MilnorBundle::from_h(h);
        let assembled = b.disk_bundle_invariants().mu_lift();
        let closed = Rational::new(BigInt::from(h) * (h - 1), 56).unwrap();
        ensure(assembled == closed, || format!("h = {h}: {assembled} != {closed}"))?;
    }
    Ok("p1^2/896 - Sign/224 == h(h-1)/56 exactly for h in [-1e4, 1e4]".into())
}

fn case_analysis() -> Check {
    let range = IntRange::inclusive(-1_000_000, 1_000_000).unwrap();
    let started = Instant::now();
    let expected: [(CaseLabel, Rational, Rational); 4] = [
        (CaseLabel::I, Rational::zero(), Rational::frac(-1, 32)),
        (CaseLabel::II, Rational::zero(), Rational::frac(1, 32)),
        (CaseLabel::III, Rational::frac(1, 2), Rational::frac(15, 32)),
        (CaseLabel::IV, Rational::zero(), Rational::frac(1, 32)),
    ];
    for (label, c, d) in expected {
        let report = check_case(label, &range, workers());
        ensure(report.matches, || format!("case {label} fails at k = {:?}", report.first_failure))?;
        ensure(report.half_term_constant == reduce_mod_z(&c), || format!("case {label} half-term constant"))?;
        ensure(report.sign_term_constant == reduce_mod_z(&d), || format!("case {label} sign-term constant"))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}, limit 60s"))?;
    Ok(format!("cases i-iv hold for k in [-1e6, 1e6], {:.2}s", elapsed.as_secs_f64()))
}

fn oracle_equivalence() -> Check {
    let range = IntRange::inclusive(-10_000, 10_000).unwrap();
    let summary = brute_force_theorem(&range, 1);
    ensure(summary.all_passed(), || format!("oracle failures: {:?}", summary.failures))?;
    let mut discrepancies = 0;
    for row in &summary.rows {
        let via_assembly = mu_quotient(&MilnorBundle::from_h(row.h.0.clone())).map_err(|e| e.to_string())?;
        if via_assembly != row.mu_quotient || mu_quotient_oracle(&row.h.0) != row.mu_quotient {
            discrepancies += 1;
        }
    }
    ensure(discrepancies == 0, || format!("{discrepancies} discrepancies"))?;
    Ok(format!("{} valid h in [-1e4, 1e4], 0 discrepancies", summary.checked))
}

fn classification_fixtures() -> Check {
    for h in [0, 1, 8, 49] {
        let v = classify_quotient(&MilnorBundle::from_h(h)).map_err(|e| e.to_string())?.verdict;
        ensure(v == Verdict::RealProjective7, || format!("h = {h}: {v}"))?;
    }
    let v = classify_quotient(&MilnorBundle::from_h(2)).map_err(|e| e.to_string())?.verdict;
    ensure(v == Verdict::NotApplicable, || format!("h = 2: {v}"))?;

    let rp7 = ambiguous(&Rational::frac(1, 32));
    ensure(rp7_mu() == rp7, || "mu(RP7) target".into())?;
    let sum = ekmu::add_ambiguous(ResidueModZ::half(), rp7).map_err(|e| e.to_string())?;
    ensure(rp7_sum_14m2_mu() == sum, || "mu(RP7 # 14M2) target".into())?;
    let literal = AmbiguousResidue::pair(
        reduce_mod_z(&Rational::frac(15, 32)),
        reduce_mod_z(&Rational::frac(17, 32)),
    );
    ensure(sum == literal, || "{15/32, 17/32}".into())?;
    Ok("h = 0, 1, 8, 49 -> RP7; h = 2 -> not_applicable; targets {1/32,31/32}, {15/32,17/32}".into())
}

fn random_h(rng: &mut ChaCha8Rng) -> BigInt {
    let bytes: [u8; 32] = rng.gen();
    BigInt::from_signed_bytes_be(&bytes)
}

fn symmetry_and_periodicity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0056);
    let offsets = [0, 1, 8, 49];
    for i in 0..1000 {
        let h = random_h(&mut rng);
        let shift = random_h(&mut rng) * 56;
        let mirror = BigInt::one() - &h;

        let mu = MilnorBundle::from_h(h.clone()).mu();
        ensure(mu == MilnorBundle::from_h(mirror).mu(), || format!("muM symmetry at {h}"))?;
        ensure(mu == MilnorBundle::from_h(&h + &shift).mu(), || format!("muM periodicity at {h}"))?;

        let valid: BigInt = h.div_floor(&BigInt::from(56)) * 56 + offsets[i % 4];
        let q = |x: BigInt| mu_quotient(&MilnorBundle::from_h(x)).map_err(|e| e.to_string());
        let mq = q(valid.clone())?;
        ensure(mq == q(BigInt::one() - &valid)?, || format!("muQuotient symmetry at {valid}"))?;
        ensure(mq == q(&valid + &shift)?, || format!("muQuotient periodicity at {valid}"))?;
        ensure(mq == rp7_mu(), || format!("muQuotient at {valid}: {mq}"))?;
    }
    Ok("1000 random 256-bit h: h <-> 1-h symmetry and 56-periodicity of muM and muQuotient".into())
}

fn theta7_consistency() -> Check {
    let mu2 = MilnorBundle::from_h(2).mu();
    ensure(mu2 == reduce_mod_z(&Rational::frac(1, 28)), || format!("mu(M2) = {mu2}"))?;
    ensure(mu2.times(14) == ResidueModZ::half(), || format!("14 mu(M2) = {}", mu2.times(14)))?;
    ensure(mu2.times(28).is_zero(), || format!("28 mu(M2) = {}", mu2.times(28)))?;
    let gen = MilnorBundle::from_h(2).theta7_class();
    ensure(gen.times(14).mu() == ResidueModZ::half(), || "14 [M2]".into())?;
    ensure(gen.times(28).is_zero(), || "28 [M2]".into())?;
    Ok("14 mu(M2) = 1/2, 28 mu(M2) = 0 mod 1".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1 theorem reproduction", theorem_reproduction),
        ("AC2 residue enumeration", residue_enumeration),
        ("AC3 mu(M_h) identity", eells_kuiper_identity),
        ("AC4 case analysis", case_analysis),
        ("AC5 oracle equivalence", oracle_equivalence),
        ("AC6 classification fixtures", classification_fixtures),
        ("AC7 symmetry and periodicity", symmetry_and_periodicity),
        ("AC8 Theta(7) consistency", theta7_consistency),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
