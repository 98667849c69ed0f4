mod common;

use common::*;
use ortho3::qfield::{eval_numeric, parse_scalar, tower_sqrt, Rational};
use ortho3::{FieldError, TowerElem, TowerField};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn field_axioms_in_depth3_tower() {
    let mut rng = rng(11);
    let field = depth3_tower(&mut rng);
    for _ in 0..200 {
        let a = random_elem(&mut rng, &field, 12);
        let b = random_elem(&mut rng, &field, 12);
        assert_eq!(&(&a + &b) - &b, a);
        if !b.is_zero() {
            let inv = b.inv().unwrap();
            assert_eq!(&(&a * &b) * &inv, a);
            assert_eq!(&b * &inv, TowerElem::one());
        }
        assert_eq!(&a + &(-&a), TowerElem::zero());
    }
}

#[test]
fn inverse_examples() {
    let q = TowerField::rationals();
    let (f, p) = tower_sqrt(&q, &TowerElem::from_int(2)).unwrap();
    let (f, r3) = tower_sqrt(&f, &TowerElem::from_int(3)).unwrap();
    let p = p.lift(&f).unwrap();
    let pq = &p * &r3;
    assert_eq!(pq.inv().unwrap().inv().unwrap(), pq);
    assert_eq!(p.inv().unwrap(), &p / &TowerElem::from_int(2));
    assert_eq!(TowerElem::zero().inv(), Err(FieldError::DivisionByZero));
}

#[test]
fn square_roots_square_back() {
    let mut rng = rng(12);
    let q = TowerField::rationals();
    let (f1, _) = tower_sqrt(&q, &TowerElem::from_int(2)).unwrap();
    let (base, _) = tower_sqrt(&f1, &TowerElem::from_int(3)).unwrap();
    let mut extended = 0;
    for i in 0..50 {
        let a = if i % 5 == 0 {
            // perfect squares must not extend the tower
            let s = random_elem(&mut rng, &base, 6);
            &s * &s
        } else {
            let x = random_elem(&mut rng, &base, 6);
            &x.abs().unwrap() + &TowerElem::from_ratio(rng.gen_range(1..30), rng.gen_range(1..5))
        };
        let (field, root) = tower_sqrt(&base, &a).unwrap();
        assert_eq!(&root * &root, a.lift(&field).unwrap());
        assert!(root.sign().unwrap().is_ge());
        if field.depth() > base.depth() {
            extended += 1;
            assert_eq!(field.depth(), base.depth() + 1);
        } else if i % 5 == 0 {
            assert!(root.field().depth() <= base.depth());
        }
    }
    assert!(extended > 20);
}

#[test]
fn negative_radicand_is_rejected() {
    let q = TowerField::rationals();
    assert!(matches!(
        tower_sqrt(&q, &TowerElem::from_int(-1)),
        Err(FieldError::NegativeRadicand)
    ));
    assert!(matches!(
        parse_scalar("sqrt(2 - sqrt(5))", &q),
        Err(FieldError::NegativeRadicand)
    ));
}

#[test]
fn enclosures_refine_monotonically() {
    let mut rng = rng(13);
    let field = depth3_tower(&mut rng);
    for _ in 0..50 {
        let a = random_elem(&mut rng, &field, 30);
        let bits = rng.gen_range(32..200);
        let coarse = eval_numeric(&a, bits);
        let fine = eval_numeric(&a, 2 * bits);
        let mid = (fine.lo() + fine.hi()) / Rational::from_integer(2.into());
        assert!(coarse.contains(&mid));
        assert!(fine.radius() <= coarse.radius());
    }
}

#[test]
fn numeric_examples() {
    let (_, pq) = parse_scalar("sqrt(2)*sqrt(3)", &TowerField::rationals()).unwrap();
    let e = eval_numeric(&pq, 64);
    assert!((e.midpoint() - 2.449490).abs() < 1e-6);
    assert!(e.contains(&q(2_449_489_742, 1_000_000_000)) || e.radius() < 1e-9);
    let (_, half) = parse_scalar("1/2", &TowerField::rationals()).unwrap();
    assert_eq!(half, TowerElem::from_ratio(1, 2));
    let (_, cos) = parse_scalar(
        "-1/2 - sqrt(2)/4 + sqrt(3)/6 - sqrt(2)*sqrt(3)/6",
        &TowerField::rationals(),
    )
    .unwrap();
    assert!((eval_numeric(&cos, 64).midpoint() + 0.973126).abs() < 1e-6);
}

#[test]
fn render_parse_identity() {
    let mut rng = rng(14);
    let towers = [depth3_tower(&mut rng), depth3_tower(&mut rng), {
        let (f, _) = tower_sqrt(&TowerField::rationals(), &TowerElem::from_int(6)).unwrap();
        f
    }];
    for i in 0..100 {
        let field = &towers[i % towers.len()];
        let a = random_elem(&mut rng, field, 40);
        let text = a.to_string();
        let (_, parsed) = parse_scalar(&text, &TowerField::rationals()).unwrap();
        assert_eq!(parsed, a, "{text}");
        // parsing into the element's own tower reproduces it without new levels
        let (same, again) = parse_scalar(&text, field).unwrap();
        assert_eq!(&same, field);
        assert_eq!(again.coefficients(), a.coefficients());
    }
}

#[test]
fn syntax_errors_carry_offsets() {
    let q = TowerField::rationals();
    for (text, offset) in [
        ("sqrt(", 5),
        ("1 + * 2", 4),
        ("(1/2", 4),
        ("", 0),
        ("2 3", 2),
    ] {
        match parse_scalar(text, &q) {
            Err(FieldError::Syntax { offset: o, .. }) => assert_eq!(o, offset, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
    assert_eq!(
        parse_scalar("1/(2-2)", &q).unwrap_err(),
        FieldError::DivisionByZero
    );
    assert_eq!(
        parse_scalar("1/0", &q).unwrap_err(),
        FieldError::DivisionByZero
    );
}

proptest! {
    #[test]
    fn parser_never_panics(text in "[0-9sqrt()+*/ -]{0,40}") {
        match parse_scalar(&text, &TowerField::rationals()) {
            Err(FieldError::Syntax { offset, .. }) => prop_assert!(offset <= text.len()),
            _ => {}
        }
    }

    #[test]
    fn rational_arithmetic_matches_bigrational(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let x = TowerElem::from_ratio(a, b);
        let y = TowerElem::from_ratio(c, d);
        let expected = q(a, b) * q(c, d) + q(a, b);
        prop_assert_eq!((&(&x * &y) + &x).as_rational().cloned(), Some(expected));
    }
}
