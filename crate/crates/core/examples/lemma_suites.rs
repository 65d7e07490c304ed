// cargo run --release --example lemma_suites [n_max] [seed]

use multiquad_wedge::lemmas::{run_suites, SuiteConfig};

fn main() -> multiquad_wedge::Result<()> {
    let mut args = std::env::args().skip(1).filter_map(|s| s.parse::<u64>().ok());
    let cfg = SuiteConfig {
        n_max: args.next().unwrap_or(6) as usize,
        seed: args.next().unwrap_or(0),
        ..SuiteConfig::default()
    };
    let rep = run_suites(&cfg)?;
    for e in &rep.entries {
        println!("{} {:<16} {:?} {}", if e.passed { "ok  " } else { "FAIL" }, e.suite, e.n, e.detail);
    }
    std::process::exit(if rep.passed() { 0 } else { 1 });
}
