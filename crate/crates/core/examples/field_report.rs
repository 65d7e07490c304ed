// cargo run --example field_report -- 2 3 5

use multiquad_wedge::f2n::GroupElt;
use multiquad_wedge::multiquad::{log_vector, MultiQuadField};

fn main() -> multiquad_wedge::Result<()> {
    let mut gens: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if gens.is_empty() {
        gens = vec![2, 3, 5];
    }
    let field = MultiQuadField::new(&gens, 128)?;
    println!("Q(√{gens:?}) has degree {}", field.degree());
    for (a, d) in field.subfields() {
        println!("  {a}  d = {d:<5} u = {}", field.unit(&a)?);
    }

    // LOG(u_a) has entry ±log u_a at each place x, signed by ⟨a, x⟩.
    let a = GroupElt::basis(field.dim(), 1);
    let v = log_vector(&field, &a)?;
    println!("\nLOG(u_{a}):");
    for (x, e) in GroupElt::all(field.dim()).zip(v.entries()) {
        println!("  x = {x}  {:+.12}", e.mid_f64());
    }
    println!("coordinate sum contains 0: {}", v.coordinate_sum().contains_zero());
    println!("\n{}", serde_json::to_string_pretty(&field.report()).unwrap());
    Ok(())
}
