// cargo run --example bound_chain
//
// The chain ‖w‖₁ >= middle sum >= coefficient floor >= 2^(2n-1) log φ log(1+√2)
// for a few elements, and the 2-norm comparison values.

use multiquad_wedge::bound::{coefficient_floor, costa_friedman_rhs, fstlm_middle, proto_bound, BoundReport};
use multiquad_wedge::extsquare::{norm1_closed, slots, ExtSqElement};
use multiquad_wedge::multiquad::MultiQuadField;

fn main() -> multiquad_wedge::Result<()> {
    let field = MultiQuadField::new(&[2, 3, 5], 128)?;
    let all = slots(3);
    let picks = [vec![(0, 1)], vec![(1, 1), (5, -2)], vec![(0, 1), (7, 1), (20, -3)]];
    for pick in &picks {
        let mut w = ExtSqElement::zero(3);
        for &(i, n) in pick {
            let (b, c) = all[i];
            w.set(b, c, n)?;
        }
        println!(
            "{:>10.5} >= {:>10.5} >= {:>10.5} >= {:.5}",
            norm1_closed(&field, &w)?.mid_f64(),
            fstlm_middle(&field, &w)?.mid_f64(),
            coefficient_floor(&field, &w)?.mid_f64(),
            proto_bound(3)?.mid_f64()
        );
    }
    for (j, degree) in [(1, 4), (2, 4), (2, 8), (3, 16)] {
        let cf = costa_friedman_rhs(j, degree)?;
        println!("j = {j}, degree {degree:>2}: {:.4} (floor {:.5})", cf.rhs.mid_f64(), cf.floor.mid_f64());
    }
    println!("\n{}", serde_json::to_string_pretty(&BoundReport::new(3)?).unwrap());
    Ok(())
}
