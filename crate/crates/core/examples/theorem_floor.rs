// cargo run --release --example theorem_floor

use multiquad_wedge::bound::theorem_bound;
use multiquad_wedge::multiquad::MultiQuadField;
use multiquad_wedge::search::{verify_theorem, SearchSpec};

fn main() -> multiquad_wedge::Result<()> {
    let cases: [(&[u64], i64, usize); 4] = [(&[2, 5], 5, 3), (&[2, 3, 5], 2, 3), (&[3, 7], 3, 3), (&[2, 3, 5, 7], 1, 2)];
    for (gens, k, s) in cases {
        let rep = verify_theorem(&SearchSpec::new(MultiQuadField::new(gens, 128)?, k, s))?;
        println!(
            "{gens:?} K={k} s={s}: {:>6} elements, floor {:.6}, minimum {:.6}, {}",
            rep.visited_count,
            rep.proto_floor.mid_f64(),
            rep.minimum_norm.mid_f64(),
            if rep.holds() { "certified" } else { "NOT certified" }
        );
    }
    println!("implied constant for the full unit lattice: {}", theorem_bound());
    Ok(())
}
