//! Randomized laws for the rings, Y-monomials, a-path certificates and JSON output.

use std::sync::OnceLock;

use proptest::prelude::*;

use qqforge::cartan::CartanMatrix;
use qqforge::qqchar::{chi_column, chi_hook, chi_vector, eta, xi, xi_rect, HookPartition};
use qqforge::ring::{ParamLaurent, ParamMonomial, ParamRational};
use qqforge::wcurrents::{apaths, omega};
use qqforge::ycalc::{QQChar, YMonomial};

const CASES: u32 = 1000;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(CASES)
}

fn monomial() -> impl Strategy<Value = ParamMonomial> {
    (-3i32..=3, -3i32..=3).prop_map(|(a, b)| ParamMonomial::new(a, b))
}

fn laurent() -> impl Strategy<Value = ParamLaurent> {
    prop::collection::vec((monomial(), -3i64..=3), 0..5).prop_map(|terms| {
        terms
            .into_iter()
            .fold(ParamLaurent::zero(), |acc, (m, k)| &acc + &(&ParamLaurent::int(k) * &ParamLaurent::monomial(m)))
    })
}

fn nonzero_laurent() -> impl Strategy<Value = ParamLaurent> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

/// Short Laurent polynomials, so that triple products stay cheap to reduce.
fn small_laurent(max_terms: usize) -> impl Strategy<Value = ParamLaurent> {
    let small = (-2i32..=2, -2i32..=2).prop_map(|(a, b)| ParamMonomial::new(a, b));
    prop::collection::vec((small, -2i64..=2), 0..=max_terms).prop_map(|terms| {
        terms
            .into_iter()
            .fold(ParamLaurent::zero(), |acc, (m, k)| &acc + &(&ParamLaurent::int(k) * &ParamLaurent::monomial(m)))
    })
}

fn rational() -> impl Strategy<Value = ParamRational> {
    (small_laurent(3), small_laurent(2).prop_filter("nonzero", |p| !p.is_zero()))
        .prop_map(|(n, d)| ParamRational::new(n, d).unwrap())
}

fn factors(colors: usize) -> impl Strategy<Value = Vec<(usize, ParamMonomial, i32)>> {
    prop::collection::vec((0..colors, monomial(), -2i32..=2), 0..6)
}

fn families() -> Vec<CartanMatrix> {
    vec![
        CartanMatrix::gl_sym(1).unwrap(),
        CartanMatrix::gl_sym(2).unwrap(),
        CartanMatrix::gl_sym(3).unwrap(),
        CartanMatrix::osp(2).unwrap(),
        CartanMatrix::osp(3).unwrap(),
        CartanMatrix::gl_std(2, 2).unwrap(),
        CartanMatrix::gl_std(1, 3).unwrap(),
    ]
}

/// Every character the builders produce for the small families.
fn characters() -> &'static [(CartanMatrix, QQChar)] {
    static CHARS: OnceLock<Vec<(CartanMatrix, QQChar)>> = OnceLock::new();
    CHARS.get_or_init(build_characters)
}

fn build_characters() -> Vec<(CartanMatrix, QQChar)> {
    let mut out = Vec::new();
    for c in families() {
        out.push((c.clone(), chi_vector(&c).unwrap()));
        match c.family {
            qqforge::cartan::Family::GlSym { n } => {
                for k in 2..=n {
                    out.push((c.clone(), chi_column(&c, k).unwrap()));
                }
                out.push((c.clone(), xi(&c).unwrap()));
                out.push((c.clone(), eta(&c).unwrap()));
            }
            qqforge::cartan::Family::Osp { .. } => {
                out.push((c.clone(), xi(&c).unwrap()));
                out.push((c.clone(), eta(&c).unwrap()));
            }
            qqforge::cartan::Family::GlStd { n, m } => {
                out.push((c.clone(), chi_hook(&c, &HookPartition::rectangle(n, m)).unwrap()));
                out.push((c.clone(), xi_rect(&c).unwrap()));
            }
            qqforge::cartan::Family::Custom => {}
        }
    }
    out
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &ParamLaurent::one(), a.clone());
    }

    #[test]
    fn rational_field_axioms(x in rational(), y in rational(), z in rational()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &y, &y + &x);
        if !y.is_zero() {
            prop_assert_eq!(&x.checked_div(&y).unwrap() * &y, x.clone());
        }
    }

    #[test]
    fn rational_canonicalization(n in laurent(), d in nonzero_laurent(), k in nonzero_laurent(), m in monomial()) {
        let r = ParamRational::new(n.clone(), d.clone()).unwrap();
        let again = ParamRational::new(r.numer().clone(), r.denom().clone()).unwrap();
        prop_assert_eq!(&again.numer(), &r.numer());
        prop_assert_eq!(&again.denom(), &r.denom());
        let scaled = ParamRational::new(&(&n * &k) * &ParamLaurent::monomial(m), &d * &k).unwrap();
        prop_assert_eq!(scaled, &r * &ParamRational::monomial(m));
        let s = ParamRational::new(k.clone(), d.clone()).unwrap();
        let canon_of_canon = &ParamRational::new(r.numer().clone(), r.denom().clone()).unwrap()
            * &ParamRational::new(s.numer().clone(), s.denom().clone()).unwrap();
        prop_assert_eq!(canon_of_canon, &r * &s);
    }

    #[test]
    fn ymonomial_canonicalization(f in factors(4)) {
        let a = YMonomial::from_factors(f.iter().copied());
        let rebuilt = YMonomial::from_factors(a.factors().map(|(v, e)| (v.color, v.shift, e)));
        prop_assert_eq!(&rebuilt, &a);
        let mut rev = f.clone();
        rev.reverse();
        prop_assert_eq!(YMonomial::from_factors(rev), a.clone());
        prop_assert!(a.factors().all(|(_, e)| e != 0));
    }

    #[test]
    fn tau_restrict_degree_laws(f in factors(6), g in factors(6), mu in monomial(), nu in monomial(), pick in 0usize..7) {
        let c = &families()[pick];
        let k = c.labels.len();
        let clip = |v: &[(usize, ParamMonomial, i32)]| v.iter().map(|(i, m, e)| (i % k, *m, *e)).collect::<Vec<_>>();
        let a = YMonomial::from_factors(clip(&f));
        let b = YMonomial::from_factors(clip(&g));
        let ab = a.mul(&b);
        prop_assert_eq!(ab.tau(mu), a.tau(mu).mul(&b.tau(mu)));
        prop_assert_eq!(a.tau(mu).tau(nu), a.tau(mu * nu));
        prop_assert_eq!(a.tau(ParamMonomial::ONE), a.clone());
        for i in 0..k {
            prop_assert_eq!(ab.restrict(i), a.restrict(i).mul(&b.restrict(i)));
            prop_assert_eq!(a.tau(mu).restrict(i), a.restrict(i).tau(mu));
        }
        let (da, db, dab) = (a.degree(c), b.degree(c), ab.degree(c));
        prop_assert_eq!(dab, da.iter().zip(&db).map(|(x, y)| x + y).collect::<Vec<_>>());
        prop_assert_eq!(a.tau(mu).degree(c), da.clone());
        prop_assert_eq!(a.inv().degree(c), da.iter().map(|x| -x).collect::<Vec<_>>());
    }

    #[test]
    fn apath_certificates(pick in 0usize..1000, mu in monomial()) {
        let chars = characters();
        let (c, chi) = &chars[pick % chars.len()];
        let shifted = QQChar::from_monomials(chi.monomials().map(|m| m.tau(mu)));
        let (top, paths) = apaths(c, &shifted).unwrap();
        prop_assert_eq!(paths.len(), shifted.len());
        for p in &paths {
            prop_assert!(p.check(c, &top));
        }
        prop_assert!(paths.iter().any(|p| p.target == top));
    }

    #[test]
    fn json_is_deterministic(f in factors(4), g in factors(4), pick in 0usize..7) {
        let c = &families()[pick];
        let k = c.labels.len();
        let clip = |v: &[(usize, ParamMonomial, i32)]| v.iter().map(|(i, m, e)| (i % k, *m, *e)).collect::<Vec<_>>();
        let (a, b) = (YMonomial::from_factors(clip(&f)), YMonomial::from_factors(clip(&g)));
        let one = QQChar::from_monomials([a.clone(), b.clone()]);
        let other = QQChar::from_monomials([b, a.clone()]);
        let s1 = serde_json::to_string(&one.to_json(c)).unwrap();
        prop_assert_eq!(&s1, &serde_json::to_string(&other.to_json(c)).unwrap());
        prop_assert_eq!(&s1, &serde_json::to_string(&one.clone().to_json(c)).unwrap());
        let mut rev = clip(&f);
        rev.reverse();
        prop_assert_eq!(
            serde_json::to_string(&a.to_json(c)).unwrap(),
            serde_json::to_string(&YMonomial::from_factors(rev).to_json(c)).unwrap()
        );
    }

    #[test]
    fn omega_identity(x in monomial()) {
        let q2 = ParamMonomial::Q.pow(2);
        let s1sq = ParamMonomial::S1.pow(2);
        prop_assume!(x != ParamMonomial::ONE && x != q2 && x != s1sq.inv());
        let w2 = omega(2, x).unwrap();
        prop_assert_eq!(&w2, &omega(2, q2 / x).unwrap());
        prop_assert_eq!(w2, omega(0, x).unwrap().checked_div(&omega(0, s1sq * x).unwrap()).unwrap());
    }
}
