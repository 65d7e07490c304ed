// cargo run --example sign_matrices [n]

use multiquad_wedge::bound::{build_pz, build_qd, lemma_lin_sides};
use multiquad_wedge::f2n::GroupElt;
use multiquad_wedge::lemmas::{all_matrices, random_vector};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> multiquad_wedge::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let z = GroupElt::new(n, (1 << n) - 1)?;
    for (name, m) in [("P", build_pz(n, &z)?), ("Q", build_qd(n, &z)?)] {
        println!("{name}_{z}: rows {:?}", m.rows_index.iter().map(|g| g.to_string()).collect::<Vec<_>>());
        println!("      cols {:?}", m.cols_index.iter().map(|g| g.to_string()).collect::<Vec<_>>());
        for row in &m.rows {
            let cells: Vec<&str> = row.iter().map(|&s| if s > 0 { "+" } else { "-" }).collect();
            println!("      {}", cells.join(" "));
        }
        println!("      orthogonal rows: {}\n", m.has_orthogonal_rows());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mats = all_matrices(n)?;
    let mut tightest = f64::INFINITY;
    for m in &mats {
        let (lhs, rhs) = lemma_lin_sides(m, &random_vector(&mut rng, m.size()))?;
        assert!(lhs >= rhs);
        tightest = tightest.min((lhs / rhs).to_f64().unwrap());
    }
    println!("{} matrices, smallest ‖MX‖₁ / (2^(n-1)‖X‖_∞) on random X: {tightest:.4}", mats.len());
    Ok(())
}
