use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;

fn p(s: &str) -> Polynomial {
    s.parse().unwrap()
}

fn a(i: u32) -> Variable {
    Variable::Moment(i)
}

#[test]
fn variable_order_is_canonical() {
    let mut vars = vec![
        Variable::MomentXX(0),
        Variable::MomentX(3),
        Variable::Moment(1),
        Variable::Space,
        Variable::Moment(0),
        Variable::Time,
        Variable::MomentX(0),
    ];
    vars.sort();
    assert_eq!(
        vars,
        vec![
            Variable::Time,
            Variable::Space,
            Variable::Moment(0),
            Variable::Moment(1),
            Variable::MomentX(0),
            Variable::MomentX(3),
            Variable::MomentXX(0),
        ]
    );
}

#[test]
fn add_examples() {
    // η^4_0 without its constant part
    assert_eq!(&p("-A2") + &p("A0^2"), p("-A2 + A0^2"));
    let q = p("3*A1 - 1/2*A0^2");
    assert_eq!(&q + &Polynomial::zero(), q);
    let c = p("3/2*A1") + p("-3/2*A1");
    assert!(c.is_zero());
    assert_eq!(c.len(), 0);
}

#[test]
fn mul_examples() {
    assert_eq!(&p("A0") * &p("A0"), p("A0^2"));
    assert_eq!(&p("A0 + A1") * &p("A0 - A1"), p("A0^2 - A1^2"));
    assert_eq!(&p("2*A0") * &p("A1"), p("2*A0*A1"));
    // η^5_0
    assert_eq!(p("-A3") + &p("2*A0") * &p("A1"), p("-A3 + 2*A1*A0"));
}

#[test]
fn partial_examples() {
    assert_eq!(p("-2*A2 + 3*A0^2").partial(a(0)), p("6*A0"));
    assert!(p("17/3").partial(a(4)).is_zero());
    let m = p("A0*A1");
    assert_eq!(m.partial(a(1)).partial(a(0)), Polynomial::one());
    assert_eq!(m.partial(a(0)).partial(a(1)), Polynomial::one());
}

#[test]
fn weighted_degree_examples() {
    assert_eq!(
        p("-2*A2 + 3*A0^2").weighted_degree(),
        WeightedDegree::Homogeneous(4)
    );
    let eta_10_1 =
        p("-2*A7 + 6*A5*A0 + 6*A4*A1 + 6*A3*A2 - 12*A3*A0^2 - 24*A2*A1*A0 - 4*A1^3 + 20*A1*A0^3");
    assert_eq!(eta_10_1.weighted_degree(), WeightedDegree::Homogeneous(9));
    assert_eq!(
        p("A0 + A1").weighted_degree(),
        WeightedDegree::Inhomogeneous
    );
    assert_eq!(
        Polynomial::zero().weighted_degree(),
        WeightedDegree::Homogeneous(0)
    );
    assert_eq!(p("5").weighted_degree(), WeightedDegree::Homogeneous(0));
    // each moment equation is homogeneous under the jet weights
    assert_eq!(
        p("A3_x + 2*A0_x*A1").weighted_degree(),
        WeightedDegree::Homogeneous(6)
    );
    assert_eq!(
        p("2*A0 - x*A0_x").weighted_degree(),
        WeightedDegree::Homogeneous(2)
    );
    assert_eq!(
        p("t*A0_x").weighted_degree(),
        WeightedDegree::Homogeneous(1)
    );
}

#[test]
fn euler_reconstruct_examples() {
    let grad: BTreeMap<_, _> = [(a(0), p("-1"))].into_iter().collect();
    assert_eq!(euler_reconstruct(&grad, 2).unwrap(), p("-A0"));

    let grad: BTreeMap<_, _> = [(a(0), p("6*A0")), (a(2), p("-2"))].into_iter().collect();
    assert_eq!(euler_reconstruct(&grad, 4).unwrap(), p("-2*A2 + 3*A0^2"));
}

#[test]
fn euler_reconstruct_eta_10_1_from_hand_gradient() {
    // gradient of -2A7 + 6A5A0 + 6A4A1 + 6A3A2 - 12A3A0^2 - 24A2A1A0 - 4A1^3 + 20A1A0^3,
    // differentiated by hand term by term
    let grad: BTreeMap<_, _> = [
        (a(0), p("6*A5 - 24*A3*A0 - 24*A2*A1 + 60*A1*A0^2")),
        (a(1), p("6*A4 - 24*A2*A0 - 12*A1^2 + 20*A0^3")),
        (a(2), p("6*A3 - 24*A1*A0")),
        (a(3), p("6*A2 - 12*A0^2")),
        (a(4), p("6*A1")),
        (a(5), p("6*A0")),
        (a(7), p("-2")),
    ]
    .into_iter()
    .collect();
    let eta = euler_reconstruct(&grad, 9).unwrap();
    assert_eq!(
        eta,
        p("-2*A7 + 6*A5*A0 + 6*A4*A1 + 6*A3*A2 - 12*A3*A0^2 - 24*A2*A1*A0 - 4*A1^3 + 20*A1*A0^3")
    );
    assert_eq!(eta.len(), 8);
}

#[test]
fn euler_reconstruct_errors() {
    let grad: BTreeMap<_, _> = [(a(0), p("A0 + A1"))].into_iter().collect();
    assert!(matches!(
        euler_reconstruct(&grad, 4),
        Err(PolyError::NonHomogeneousGradient { .. })
    ));
    // homogeneous components that are not a gradient
    let grad: BTreeMap<_, _> = [(a(0), p("A1")), (a(1), Polynomial::zero())]
        .into_iter()
        .collect();
    assert!(matches!(
        euler_reconstruct(&grad, 5),
        Err(PolyError::GradientMismatch { .. })
    ));
    let grad: BTreeMap<_, _> = [(Variable::Space, p("1"))].into_iter().collect();
    assert!(matches!(
        euler_reconstruct(&grad, 1),
        Err(PolyError::NonMomentGradient(Variable::Space))
    ));
    assert_eq!(
        euler_reconstruct(&BTreeMap::new(), 0),
        Err(PolyError::ZeroDegree)
    );
}

#[test]
fn text_format() {
    assert_eq!(p("-2*A2 + 3*A0^2").to_string(), "-2*A2 + 3*A0^2");
    assert_eq!(p("3*A0^2 - 2*A2").to_string(), "-2*A2 + 3*A0^2");
    assert_eq!(Polynomial::zero().to_string(), "0");
    assert_eq!(p("-1/2").to_string(), "-1/2");
    assert_eq!(p("x*A1_x + A0_xx*t").to_string(), "t*A0_xx + x*A1_x");
    assert_eq!(p("2/4*A0").to_string(), "1/2*A0");
    assert_eq!(p("A0 * A0 * 3"), p("3*A0^2"));
    assert_eq!(p("+A1"), p("A1"));
    assert!("A0 A1".parse::<Polynomial>().is_err());
    assert!("B3".parse::<Polynomial>().is_err());
    assert!("A".parse::<Polynomial>().is_err());
    assert!("1/0".parse::<Polynomial>().is_err());
    assert!("".parse::<Polynomial>().is_err());
    assert!("A0_y".parse::<Polynomial>().is_err());
}

#[test]
fn json_format() {
    let q = p("-2*A2 + 3*A0^2");
    let json = q.to_json().to_string();
    assert_eq!(
        json,
        r#"[{"coeff":"-2","exps":{"A2":1}},{"coeff":"3","exps":{"A0":2}}]"#
    );
    assert_eq!(json.parse::<Polynomial>().unwrap(), q);
    let r: Polynomial = r#"[{"coeff": "1/3", "exps": {"A0_x": 1, "x": 2}}]"#
        .parse()
        .unwrap();
    assert_eq!(r, p("1/3*x^2*A0_x"));
    assert!(r#"[{"coeff": "q", "exps": {}}]"#.parse::<Polynomial>().is_err());
    assert_eq!("[]".parse::<Polynomial>().unwrap(), Polynomial::zero());
}

#[test]
fn latex_format() {
    assert_eq!(p("-2*A2 + 3*A0^2").to_latex(), "-2A^{2} + 3(A^{0})^{2}");
    assert_eq!(p("1/2*x*A0_x").to_latex(), "\\frac{1}{2}xA^{0}_{x}");
    assert_eq!(Polynomial::zero().to_latex(), "0");
}

fn moment_poly() -> impl Strategy<Value = Polynomial> {
    let term = (
        -10i64..=10,
        1i64..=4,
        proptest::collection::vec((0u32..7, 1u32..3), 0..4),
    );
    proptest::collection::vec(term, 0..6).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(n, d, exps)| {
            (
                BigRational::new(BigInt::from(n), BigInt::from(d)),
                Monomial::from_pairs(exps.into_iter().map(|(i, e)| (Variable::Moment(i), e))),
            )
        }))
    })
}

/// Homogeneous polynomials of weighted degree `d`, built from random
/// partitions of `d` into parts `m + 2`.
fn homogeneous_poly(d: u32) -> impl Strategy<Value = Polynomial> {
    let term = (-10i64..=10, proptest::collection::vec(0u32..6, 0..8));
    proptest::collection::vec(term, 1..6).prop_map(move |terms| {
        Polynomial::from_terms(terms.into_iter().filter_map(|(c, choices)| {
            // greedily consume weights until exactly d is reached
            let mut left = d as i64;
            let mut pairs = Vec::new();
            for m in choices {
                let w = m as i64 + 2;
                if w <= left {
                    pairs.push((Variable::Moment(m), 1));
                    left -= w;
                }
            }
            if left >= 2 {
                pairs.push((Variable::Moment(left as u32 - 2), 1));
                left = 0;
            }
            (left == 0).then(|| (int(c), Monomial::from_pairs(pairs)))
        }))
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in moment_poly(), b in moment_poly(), c in moment_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn mixed_partials_commute(q in moment_poly(), u in 0u32..7, v in 0u32..7) {
        let (u, v) = (Variable::Moment(u), Variable::Moment(v));
        prop_assert_eq!(q.partial(u).partial(v), q.partial(v).partial(u));
    }

    #[test]
    fn leibniz_rule(a in moment_poly(), b in moment_poly(), v in 0u32..7) {
        let v = Variable::Moment(v);
        prop_assert_eq!((&a * &b).partial(v), &(&a.partial(v) * &b) + &(&a * &b.partial(v)));
    }

    #[test]
    fn text_and_json_round_trip(q in moment_poly()) {
        prop_assert_eq!(q.to_string().parse::<Polynomial>().unwrap(), q.clone());
        prop_assert_eq!(q.to_json().to_string().parse::<Polynomial>().unwrap(), q);
    }

    #[test]
    fn weighted_euler_identity(q in (2u32..12).prop_flat_map(homogeneous_poly)) {
        let d = match q.weighted_degree() {
            WeightedDegree::Homogeneous(w) => w,
            WeightedDegree::Inhomogeneous => unreachable!("generator yields homogeneous input"),
        };
        let mut lhs = Polynomial::zero();
        for v in q.variables() {
            lhs += q.partial(v).mul_monomial(&int(v.weight()), &Monomial::var(v));
        }
        prop_assert_eq!(lhs, q.scale_int(d));
    }

    #[test]
    fn euler_reconstruct_inverts_gradient(q in (2u32..12).prop_flat_map(homogeneous_poly)) {
        let degree = match q.weighted_degree() {
            WeightedDegree::Homogeneous(w) if w > 0 => w as u32,
            _ => return Ok(()),
        };
        let grad: BTreeMap<_, _> = q.variables().into_iter().map(|v| (v, q.partial(v))).collect();
        prop_assert_eq!(euler_reconstruct(&grad, degree).unwrap(), q);
    }
}
