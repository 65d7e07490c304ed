use proptest::prelude::*;

use multiquad_wedge::certify::{compare_norm, norm_form, proto_bound_form, Comparison};
use multiquad_wedge::extsquare::{norm1_closed, slots, ExtSqElement};
use multiquad_wedge::multiquad::MultiQuadField;

fn element(n: usize, coeffs: &[i64]) -> ExtSqElement {
    let mut w = ExtSqElement::zero(n);
    for (&(b, c), &k) in slots(n).iter().zip(coeffs) {
        w.set(b, c, k).unwrap();
    }
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn form_matches_interval(coeffs in prop::collection::vec(-4i64..=4, 21)) {
        let f = MultiQuadField::new(&[2, 3, 5], 128).unwrap();
        let w = element(3, &coeffs);
        let nf = norm_form(&f, &w).unwrap();
        prop_assert!(nf.is_decided());
        prop_assert!(nf.form.eval(256).unwrap().intersects(&norm1_closed(&f, &w).unwrap()));
    }

    #[test]
    fn form_is_homogeneous(coeffs in prop::collection::vec(-3i64..=3, 3), t in -5i64..=5) {
        let f = MultiQuadField::new(&[2, 5], 128).unwrap();
        let w = element(2, &coeffs);
        let mut scaled = norm_form(&f, &w).unwrap().form;
        let base = scaled.clone();
        scaled.add_scaled(&base, t.abs() as i128 - 1);
        prop_assert_eq!(norm_form(&f, &w.scaled(t)).unwrap().form, scaled);
    }

    #[test]
    fn nonzero_elements_clear_the_floor(coeffs in prop::collection::vec(-3i64..=3, 3)) {
        let f = MultiQuadField::new(&[2, 5], 128).unwrap();
        let w = element(2, &coeffs);
        prop_assume!(!w.is_zero());
        let norm = norm1_closed(&f, &w).unwrap();
        let c = compare_norm(&f, &w, &norm, &proto_bound_form(2)).unwrap();
        prop_assert!(c == Comparison::Greater || c == Comparison::Equal);
    }
}
