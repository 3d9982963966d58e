mod common;

use common::{random_regions, FormulaGen};
use proptest::prelude::*;
use stlplan::stl::{eval_predicate, parse_formula, Aabb, Formula, Interval, Predicate};
use stlplan::Vec3;

fn gen() -> FormulaGen {
    FormulaGen { ts: 0.1, max_quarters: 40, allow_true: true }
}

fn vec3() -> impl Strategy<Value = Vec3> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>(), depth in 0usize..5) {
        let f = gen().formula(&mut common::rng(seed), depth);
        let text = f.to_string();
        let back = parse_formula(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, f, "{}", text);
    }

    #[test]
    fn inside_is_minus_outside(p in vec3(), seed in any::<u64>()) {
        let b = random_regions(&mut common::rng(seed))[0];
        let at = [p];
        let inside = eval_predicate(&Predicate::InsideBox { agent: 0, region: b }, &at).unwrap();
        let outside = eval_predicate(&Predicate::OutsideBox { agent: 0, region: b }, &at).unwrap();
        prop_assert_eq!(inside, -outside);
        prop_assert_eq!(inside >= 0.0, b.contains(&p));
    }

    #[test]
    fn separation_is_symmetric(a in vec3(), b in vec3(), delta in 0.01..3.0f64) {
        let at = [a, b];
        let ab = eval_predicate(&Predicate::Separation { first: 0, second: 1, delta_min: delta }, &at).unwrap();
        let ba = eval_predicate(&Predicate::Separation { first: 1, second: 0, delta_min: delta }, &at).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((ab - ((a - b).norm() - delta)).abs() < 1e-12);
    }

    #[test]
    fn temporal_wrapping_adds_the_upper_bound(seed in any::<u64>(), lo in 0u32..20, width in 0u32..20) {
        let f = gen().formula(&mut common::rng(seed), 3);
        let iv = Interval::new(lo as f64 * 0.25, (lo + width) as f64 * 0.25).unwrap();
        let h = f.horizon();
        prop_assert_eq!(Formula::always(iv, f.clone()).horizon(), h + iv.hi());
        prop_assert_eq!(Formula::eventually(iv, f).horizon(), h + iv.hi());
    }
}

#[test]
fn box_margin_is_distance_to_nearest_face() {
    let ws = Aabb::new(Vec3::repeat(-5.0), Vec3::repeat(5.0)).unwrap();
    let at = [Vec3::new(1.0, -2.0, 4.5)];
    assert_eq!(eval_predicate(&Predicate::InsideBox { agent: 0, region: ws }, &at).unwrap(), 0.5);
}
