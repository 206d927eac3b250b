//! Exact polynomials in even and odd graded variables.

mod chart;
mod poly;

pub use chart::{
    Chart, ChartRef, GradedVariable, Grading, GradingKind, Level, VarKind, CS_GRADING, C_GRADING,
    ETAS_GRADING, ETA_GRADING, XS_GRADING, X_GRADING,
};
pub use poly::{format_rational, normalize, rat, ratio, Monomial, Poly, Rational, RawTerm};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;
    use proptest::prelude::*;

    fn chart() -> ChartRef {
        Chart::gauge(&["x", "y"], 1, 1).unwrap()
    }

    fn raw(c: i64, f: &[(&str, u32)]) -> RawTerm {
        RawTerm {
            coeff: rat(c),
            factors: f.iter().map(|(n, e)| (n.to_string(), *e)).collect(),
        }
    }

    fn p(ch: &ChartRef, name: &str) -> Poly {
        Poly::named(ch, name).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let ch = chart();
        assert!(normalize(&ch, &[raw(1, &[("eta1", 1), ("eta1", 1)])]).unwrap().is_zero());
        let anti = normalize(
            &ch,
            &[raw(1, &[("xs_x", 1), ("xs_y", 1)]), raw(1, &[("xs_y", 1), ("xs_x", 1)])],
        )
        .unwrap();
        assert!(anti.is_zero());
        let dist = (&p(&ch, "x") + &p(&ch, "y")) * p(&ch, "xs_x");
        let expect = normalize(&ch, &[raw(1, &[("x", 1), ("xs_x", 1)]), raw(1, &[("y", 1), ("xs_x", 1)])]).unwrap();
        assert_eq!(dist, expect);
        assert_eq!(
            normalize(&ch, &[raw(1, &[("nope", 1)])]),
            Err(crate::Error::UnknownVariable("nope".into()))
        );
    }

    #[test]
    fn derivative_examples() {
        let ch = chart();
        let x = ch.lookup("x").unwrap();
        let f = p(&ch, "x").pow(2) * p(&ch, "y");
        assert_eq!(f.left_derivative(x), (p(&ch, "x") * p(&ch, "y")).scale(&rat(2)));

        let g = p(&ch, "xs_x") * p(&ch, "xs_y");
        assert_eq!(g.left_derivative(ch.lookup("xs_x").unwrap()), p(&ch, "xs_y"));
        assert_eq!(g.left_derivative(ch.lookup("xs_y").unwrap()), -p(&ch, "xs_x"));
        // right derivative by the sign rule
        assert_eq!(g.right_derivative(ch.lookup("xs_y").unwrap()), p(&ch, "xs_x"));
    }

    #[test]
    fn substitution_and_restrictions() {
        let ch = chart();
        let f = p(&ch, "xs_x") * p(&ch, "y");
        assert!(f.restrict_to_extended().is_zero());
        let g = &(&(p(&ch, "x") * p(&ch, "etas1")) + &(p(&ch, "c1") * p(&ch, "y") * p(&ch, "xs_x")))
            + &(p(&ch, "dc1") * p(&ch, "x"));
        assert_eq!(g.restrict_to_lagrangian(), p(&ch, "dc1") * p(&ch, "x"));

        let x = ch.lookup("x").unwrap();
        let id = [(x, p(&ch, "x"))].into_iter().collect();
        assert_eq!(g.substitute(&id).unwrap(), g);
        let bad = [(x, p(&ch, "c1"))].into_iter().collect();
        assert!(matches!(g.substitute(&bad), Err(crate::Error::ParityMismatch(_))));
    }

    #[test]
    fn grading_examples() {
        let ch = chart();
        assert_eq!(p(&ch, "xs_x").grading_of(GradingKind::Ghost).unwrap(), 1);
        assert_eq!(p(&ch, "etas1").grading_of(GradingKind::Ghost).unwrap(), 2);
        let ch2 = Chart::gauge(&["x"], 0, 2).unwrap();
        let u = p(&ch2, "x").pow(2) + Poly::one(&ch2);
        let f = p(&ch2, "c2") * p(&ch2, "c1") * u * p(&ch2, "cs1");
        assert_eq!(f.grading_of(GradingKind::Ghost).unwrap(), 2);
        let mixed = p(&ch, "x") + p(&ch, "c1");
        assert!(matches!(mixed.grading_of(GradingKind::Ghost), Err(crate::Error::Inhomogeneous(_))));
        assert!(p(&ch, "dx").grading_of(GradingKind::Momentum).is_err());
    }

    #[test]
    fn display_is_canonical() {
        let ch = chart();
        let f = p(&ch, "xs_y") * p(&ch, "xs_x").scale(&rat(2)) - p(&ch, "x").scale(&ratio(1, 2));
        assert_eq!(f.to_string(), "-1/2*x - 2*xs_x*xs_y");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn normalize_is_idempotent(seed in any::<u64>()) {
            let ch = chart();
            let mut s = Sampler::new(seed);
            for _ in 0..16 {
                let terms = s.raw_terms(&ch, 4);
                let once = normalize(&ch, &terms).unwrap();
                let again: Vec<RawTerm> = once.terms().map(|(m, c)| RawTerm {
                    coeff: c.clone(),
                    factors: m.iter().map(|(v, e)| (ch.var(*v as usize).name.clone(), *e)).collect(),
                }).collect();
                prop_assert_eq!(normalize(&ch, &again).unwrap(), once);
            }
        }

        #[test]
        fn odd_elements_anticommute(seed in any::<u64>()) {
            let ch = chart();
            let mut s = Sampler::new(seed);
            let vars: Vec<usize> = (0..ch.len()).collect();
            let u = s.poly_with_parity(&ch, &vars, 1, 3);
            let v = s.poly_with_parity(&ch, &vars, 1, 3);
            prop_assert!((&(&u * &v) + &(&v * &u)).is_zero());
        }

        #[test]
        fn left_derivative_is_graded_leibniz(seed in any::<u64>()) {
            let ch = chart();
            let mut s = Sampler::new(seed);
            let vars: Vec<usize> = (0..ch.len()).collect();
            let pf = s.parity();
            let f = s.poly_with_parity(&ch, &vars, pf, 3);
            let pg = s.parity();
            let g = s.poly_with_parity(&ch, &vars, pg, 3);
            for v in 0..ch.len() {
                let lhs = (&f * &g).left_derivative(v);
                let sign = if ch.is_odd(v) && pf == 1 { -rat(1) } else { rat(1) };
                let rhs = &(&f.left_derivative(v) * &g) + &(&f * &g.left_derivative(v)).scale(&sign);
                prop_assert_eq!(lhs, rhs);
                // right derivative sign rule
                let exp = ch.is_odd(v) as u8 * (pf + 1);
                let r = f.left_derivative(v).scale(&if exp % 2 == 1 { -rat(1) } else { rat(1) });
                prop_assert_eq!(f.right_derivative(v), r);
            }
        }

        #[test]
        fn gradings_add_under_products(seed in any::<u64>()) {
            let ch = chart();
            let mut s = Sampler::new(seed);
            let cot: Vec<usize> = ch.cotangent_vars().collect();
            let f = s.monomial_poly(&ch, &cot);
            let g = s.monomial_poly(&ch, &cot);
            let fg = &f * &g;
            prop_assume!(!fg.is_zero());
            for kind in [GradingKind::Ghost, GradingKind::Momentum, GradingKind::Resolution, GradingKind::Form] {
                prop_assert_eq!(
                    fg.grading_of(kind).unwrap(),
                    f.grading_of(kind).unwrap() + g.grading_of(kind).unwrap()
                );
            }
            prop_assert_eq!(
                fg.parity().unwrap(),
                (f.parity().unwrap() + g.parity().unwrap()) % 2
            );
        }
    }
}
