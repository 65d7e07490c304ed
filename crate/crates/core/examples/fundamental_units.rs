// cargo run --example fundamental_units [m_max]
//
// Fundamental units of Q(√m) and their logs, then the check that no unit
// beats (1+√5)/2, and none but Q(√5)'s beats 1+√2.

use multiquad_wedge::quadunit::{fundamental_unit, is_square_free, log_unit, verify_quadunit_lemma};

fn main() -> multiquad_wedge::Result<()> {
    let m_max: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    for m in (2..=m_max.min(30)).filter(|&m| is_square_free(m)) {
        let u = fundamental_unit(m)?;
        let log = log_unit(&u, 64)?;
        println!("m = {m:>2}  u = {u:<24} N(u) = {:>2}  log u ∈ {log}", u.norm_sign);
    }
    let r = verify_quadunit_lemma(m_max.max(13))?;
    println!(
        "\n{} radicands up to {}: equality with (1+√5)/2 at {:?}, with 1+√2 at {:?}, {} violations",
        r.checked,
        r.m_max,
        r.golden_equalities,
        r.silver_equalities,
        r.violations.len()
    );
    Ok(())
}
