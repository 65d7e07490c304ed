// cargo run --example certified_intervals
//
// Enclosures of log u shrink and nest as the precision grows. Norms that tie
// exactly are decided by comparing integer combinations of log products.

use multiquad_wedge::certify::{compare_norm, proto_bound_form};
use multiquad_wedge::extsquare::{norm1_closed, ExtSqElement};
use multiquad_wedge::f2n::GroupElt;
use multiquad_wedge::multiquad::MultiQuadField;
use multiquad_wedge::quadunit::{fundamental_unit, log_unit};

fn main() -> multiquad_wedge::Result<()> {
    let u = fundamental_unit(2)?;
    let mut prev = None;
    for p in [32, 64, 128, 256] {
        let l = log_unit(&u, p)?;
        let nested = prev.as_ref().is_none_or(|q| l.is_subset_of(q));
        println!("{p:>4} bits  log(1+√2) ∈ {l}  nested {nested}");
        prev = Some(l);
    }

    let field = MultiQuadField::new(&[2, 5], 128)?;
    let w = ExtSqElement::single(GroupElt::basis(2, 1), GroupElt::basis(2, 2), 1)?;
    let norm = norm1_closed(&field, &w)?;
    println!("\n‖e1∧e2‖₁ ∈ {norm}");
    println!("against 8 log φ log(1+√2): {:?}", compare_norm(&field, &w, &norm, &proto_bound_form(2))?);
    Ok(())
}
