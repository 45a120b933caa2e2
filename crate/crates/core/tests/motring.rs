use std::collections::BTreeMap;

use proptest::prelude::*;
use tropmot::motring::*;
use tropmot::rat::int;
use tropmot::Error;

fn hyp(n: usize, s: &str) -> ClassSymbol {
    ClassSymbol::hypersurface(&LaurentPoly::parse(n, s).unwrap(), MuAction::trivial(n)).unwrap()
}

fn cls(s: &str) -> MotClass {
    MotClass::parse(s).unwrap()
}

/// Zeros of `h` in `(𝔽_q^×)ⁿ`, by direct evaluation of the rational
/// coefficients modulo `q` with exponents reduced mod `q - 1`.
fn naive_torus_count(h: &LaurentPoly, q: i64) -> i64 {
    let n = h.nvars();
    let terms: Vec<(i64, Vec<i64>)> = h
        .terms()
        .iter()
        .map(|(e, c)| {
            let num = c.numer().to_string().parse::<i64>().unwrap().rem_euclid(q);
            let den = c.denom().to_string().parse::<i64>().unwrap().rem_euclid(q);
            let inv = (1..q).find(|k| k * den % q == 1).unwrap();
            (num * inv % q, e.iter().map(|k| k.rem_euclid(q - 1)).collect())
        })
        .collect();
    let mut count = 0;
    let mut x = vec![1i64; n];
    loop {
        let v = terms.iter().fold(0, |s, (c, e)| {
            let t = e.iter().zip(&x).fold(*c, |acc, (k, xi)| (0..*k).fold(acc, |a, _| a * xi % q));
            (s + t) % q
        });
        if v == 0 {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 1;
            i += 1;
        }
    }
}

#[test]
fn ring_arithmetic() {
    assert_eq!(&cls("L - 1") + &MotClass::one(), MotClass::lefschetz());
    assert_eq!(&cls("L - 1") * &cls("L - 1"), cls("L^2 - 2*L + 1"));
    let s = MotClass::symbol(hyp(2, "x + y + 1"));
    assert!((&s * &MotClass::zero()).is_zero());
    assert_eq!((&s * &s).terms().len(), 1);
    assert_eq!(&s - &s, MotClass::zero());
}

#[test]
fn printing_is_stable() {
    assert_eq!(cls("L^2 - 2*L + 1").to_string(), "L^2 - 2*L + 1");
    assert_eq!(cls("1 - L").to_string(), "1 - L");
    let a = ClassSymbol::hypersurface(&LaurentPoly::parse(2, "x + y + 1").unwrap(), MuAction::new(3, vec![1, 2])).unwrap();
    assert_eq!(a.to_string(), "[h: x+y+1 | n=2 | mu(d=3; v=1,2)]");
    let c = &MotClass::symbol(a).scale(3) * &cls("L - 1");
    assert_eq!(MotClass::parse(&c.to_string()).unwrap(), c);
}

#[test]
fn torus_classes() {
    assert_eq!(torus_class(0), MotClass::one());
    assert_eq!(torus_class(1), cls("L - 1"));
    assert_eq!(torus_class(3), cls("L^3 - 3*L^2 + 3*L - 1"));
    for q in [5u64, 7, 11] {
        for n in 0..4 {
            assert_eq!(realize_auto(&torus_class(n), q).unwrap(), (q as i128 - 1).pow(n as u32));
        }
    }
}

#[test]
fn splitting_examples() {
    let s = hyp(2, "x + y + 1");
    assert_eq!(split_torus_factor(&s).unwrap(), MotClass::symbol(s));
    let t = split_torus_factor(&hyp(2, "x + 1")).unwrap();
    assert_eq!(t, &MotClass::symbol(hyp(1, "x + 1")) * &torus_class(1));
    let u = split_torus_factor(&hyp(2, "x*y + 1")).unwrap();
    assert_eq!(u, &MotClass::symbol(hyp(1, "x + 1")) * &torus_class(1));
}

#[test]
fn realization_examples() {
    assert_eq!(realize_auto(&cls("L - 1"), 5).unwrap(), 4);
    assert_eq!(realize_auto(&MotClass::symbol(hyp(2, "x + y + 1")), 5).unwrap(), 3);
    let mu = ClassSymbol::mu_points(4);
    let mut table = SymbolTable::new(13);
    table.insert(mu.clone(), 4);
    assert_eq!(realize_count(&MotClass::symbol(mu).scale(2), 13, &table).unwrap(), 8);
    let half = ClassSymbol::hypersurface(&LaurentPoly::parse(1, "x - 1/5").unwrap(), MuAction::trivial(1)).unwrap();
    assert_eq!(realize_auto(&MotClass::symbol(half), 5), Err(Error::BadReduction { q: 5 }));
}

#[test]
fn count_examples() {
    assert_eq!(count_hypersurface_ff(&LaurentPoly::parse(1, "x - 1").unwrap(), 7).unwrap(), 1);
    assert_eq!(count_hypersurface_ff(&LaurentPoly::parse(2, "x + y + 1").unwrap(), 5).unwrap(), 3);
    assert_eq!(count_hypersurface_ff(&LaurentPoly::parse(2, "x + y").unwrap(), 5).unwrap(), 4);
    assert_eq!(count_affine_ff(&LaurentPoly::parse(2, "x^2 + y^2").unwrap(), &int(1), 7).unwrap(), 8);
}

fn laurent_strategy(n: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, n), -4i64..=4), 1..4).prop_filter_map(
        "nonzero polynomial",
        move |terms| {
            let p = LaurentPoly::new(n, terms.into_iter().map(|(e, c)| (e, int(c)))).unwrap();
            (!p.is_zero()).then_some(p)
        },
    )
}

fn class_strategy() -> impl Strategy<Value = MotClass> {
    let monomial = (prop::collection::vec(0usize..3, 0..3), 0u32..3, -3i64..=3);
    prop::collection::vec(monomial, 0..5).prop_map(|ms| {
        MotClass::from_terms(ms.into_iter().map(|(syms, lexp, c)| {
            let symbols = syms.into_iter().map(|i| ClassSymbol::opaque(&format!("S{i}"), MuAction::torsor(1)).unwrap());
            let mut symbols: Vec<_> = symbols.collect();
            symbols.sort();
            (Monomial { symbols, lexp }, c)
        }))
    })
}

fn synthetic_table(q: u64, counts: &[i128]) -> SymbolTable {
    let mut t = SymbolTable::new(q);
    for (i, c) in counts.iter().enumerate() {
        t.insert(ClassSymbol::opaque(&format!("S{i}"), MuAction::torsor(1)).unwrap(), *c);
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn realization_is_a_ring_homomorphism(
        a in class_strategy(),
        b in class_strategy(),
        counts in prop::collection::vec(-20i128..20, 3),
        q in prop::sample::select(vec![5u64, 7, 11]),
    ) {
        let t = synthetic_table(q, &counts);
        let r = |c: &MotClass| realize_count(c, q, &t).unwrap();
        prop_assert_eq!(r(&(&a + &b)), r(&a) + r(&b));
        prop_assert_eq!(r(&(&a * &b)), r(&a) * r(&b));
        prop_assert_eq!(r(&(&a - &b)), r(&a) - r(&b));
    }

    #[test]
    fn splitting_preserves_counts(h in laurent_strategy(3)) {
        let sym = ClassSymbol::hypersurface(&h, MuAction::trivial(3)).unwrap();
        let split = split_torus_factor(&sym).unwrap();
        for q in [5u64, 7, 11] {
            prop_assert_eq!(realize_auto(&split, q).unwrap(), naive_torus_count(&h, q as i64) as i128);
        }
    }

    #[test]
    fn canonical_form_is_idempotent(h in laurent_strategy(2)) {
        let c = h.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        let sym = ClassSymbol::hypersurface(&h, MuAction::trivial(2)).unwrap();
        prop_assert_eq!(sym.poly().unwrap(), &c);
    }

    #[test]
    fn class_text_round_trips(a in class_strategy()) {
        prop_assert_eq!(MotClass::parse(&a.to_string()).unwrap(), a);
    }
}

#[test]
fn actions_distinguish_symbols() {
    let h = LaurentPoly::parse(1, "x^2 - 1").unwrap();
    let a = ClassSymbol::hypersurface(&h, MuAction::new(2, vec![1])).unwrap();
    let b = ClassSymbol::hypersurface(&h, MuAction::trivial(1)).unwrap();
    assert_ne!(a, b);
    assert_eq!(MuAction::new(4, vec![2]), MuAction::new(2, vec![1]));
    let counts: BTreeMap<_, _> = [(a.clone(), 2)].into_iter().collect();
    let t = SymbolTable { q: 5, counts };
    assert!(realize_count(&MotClass::symbol(b), 5, &t).is_err());
    assert_eq!(realize_count(&MotClass::symbol(a), 5, &t).unwrap(), 2);
}
