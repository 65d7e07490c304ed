// cargo run --release --example golden_silver_minimum [K] [s]
//
// Smallest ‖w‖₁ over Q(√2, √5) with |n_{b,c}| <= K and at most s terms.

use multiquad_wedge::multiquad::MultiQuadField;
use multiquad_wedge::search::{enumerate_min, SearchSpec};

fn main() -> multiquad_wedge::Result<()> {
    let mut args = std::env::args().skip(1).filter_map(|s| s.parse::<i64>().ok());
    let k = args.next().unwrap_or(3);
    let s = args.next().unwrap_or(3) as usize;
    let r = enumerate_min(&SearchSpec::new(MultiQuadField::new(&[2, 5], 128)?, k, s))?;
    println!("visited   {}", r.visited_count);
    println!("minimum   {}", r.minimum_norm);
    println!("floor     {}", r.certified_floor);
    for w in &r.minimizers {
        for (b, c, n) in w.coefficients() {
            println!("minimizer n_{{{b},{c}}} = {n}");
        }
    }
    println!("attains the floor: {}", r.margin().contains_zero());
    Ok(())
}
