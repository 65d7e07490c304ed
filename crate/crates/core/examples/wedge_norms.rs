// cargo run --example wedge_norms [coefficients.json]
//
// Evaluates ‖w‖₁ by expanding w in the basis δ^x ∧ δ^y and by the regrouped
// formula. Without a file, uses 2·[e1,e2] - [e1,e3] + [e2,e1+e2+e3] in Q(√2,√3,√5).

use multiquad_wedge::extsquare::{expand, norm1_closed, norm1_direct, CoefficientFile};
use multiquad_wedge::multiquad::MultiQuadField;

const DEFAULT: &str = r#"{
  "generators": [2, 3, 5],
  "coefficients": [
    {"b": [1, 0, 0], "c": [0, 1, 0], "n": 2},
    {"b": [1, 0, 0], "c": [0, 0, 1], "n": -1},
    {"b": [0, 1, 0], "c": [1, 1, 1], "n": 1}
  ]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let file: CoefficientFile = serde_json::from_str(&text)?;
    let field = MultiQuadField::new(&file.generators, 128)?;
    let w = file.element()?;

    let e = expand(&field, &w)?;
    let nonzero = e.coefficients().iter().filter(|c| !c.contains_zero()).count();
    let direct = norm1_direct(&e);
    let closed = norm1_closed(&field, &w)?;
    println!("{} generator terms, {nonzero} nonzero coordinates after expansion", w.support_size());
    println!("direct {direct}");
    println!("closed {closed}");
    println!("agree  {}", direct.intersects(&closed));
    Ok(())
}
