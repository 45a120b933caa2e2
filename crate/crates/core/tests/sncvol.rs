use num_integer::Integer;
use proptest::prelude::*;
use tropmot::motring::*;
use tropmot::sncvol::*;
use tropmot::trophyp::{vol_affine_stratified, Orthant, StratifiedAffineProblem};

fn comp(name: &str, mult: u64) -> Component {
    Component { name: name.into(), mult }
}

fn cls(s: &str) -> MotClass {
    MotClass::parse(s).unwrap()
}

fn node() -> SncModel {
    SncModel::new(
        vec![comp("E1", 1), comp("E2", 1)],
        [(vec![0], torus_stratum(1)), (vec![1], torus_stratum(1)), (vec![0, 1], MotClass::one())],
    )
    .unwrap()
}

/// `f = x^a y^b` on 𝔸² is already in normal crossings form. Over `E1° ≅ 𝔾_m`
/// (coordinate `y`) the cover is `{s^a y^b = 1}`, over `E2°` it is
/// `{s^b x^a = 1}`, and over the origin it is `μ_gcd(a,b)`.
fn monomial_model(a: u64, b: u64) -> SncModel {
    let cover = |p: &str, order: u64, w: Vec<i64>| {
        let h = LaurentPoly::parse(2, p).unwrap();
        MotClass::symbol(ClassSymbol::hypersurface(&h, MuAction::new(order, w)).unwrap())
    };
    SncModel::new(
        vec![comp("E1", a), comp("E2", b)],
        [
            (vec![0], cover(&format!("x^{a}*y^{b} - 1"), a, vec![1, 0])),
            (vec![1], cover(&format!("x^{b}*y^{a} - 1"), b, vec![1, 0])),
            (vec![0, 1], mu_orbit(a.gcd(&b))),
        ],
    )
    .unwrap()
}

/// Number of `s ∈ 𝔽_q` with `s^g = 1`.
fn roots_of_unity(g: u64, q: u64) -> i128 {
    (1..q).filter(|s| (0..g).fold(1u64, |acc, _| acc * s % q) == 1).count() as i128
}

#[test]
fn node_examples() {
    let m = node();
    assert_eq!(nearby_fiber(&m).unwrap(), cls("L - 1"));
    assert_eq!(vol_snc(&m, &SupportSelection::full()).unwrap(), nearby_fiber(&m).unwrap());
    let origin = SupportSelection::only([(vec![0, 1], MotClass::one())]);
    let psi = milnor_fiber(&m, &origin).unwrap();
    assert_eq!(psi, cls("1 - L"));
    for q in [5u64, 7, 11] {
        assert_eq!(realize_auto(&nearby_fiber(&m).unwrap(), q).unwrap(), q as i128 - 1);
    }
}

#[test]
fn power_and_smooth_examples() {
    let m = SncModel::new(vec![comp("E1", 3)], [(vec![0], mu_orbit(3))]).unwrap();
    let v = nearby_fiber(&m).unwrap();
    assert_eq!(v, MotClass::symbol(ClassSymbol::mu_points(3)));
    assert_eq!(realize_auto(&v, 7).unwrap(), 3);

    let conic = MotClass::symbol(
        ClassSymbol::hypersurface(&LaurentPoly::parse(2, "x^2 + y^2 - 1").unwrap(), MuAction::trivial(2)).unwrap(),
    );
    let smooth = SncModel::new(vec![comp("X", 1)], [(vec![0], conic.clone())]).unwrap();
    assert_eq!(nearby_fiber(&smooth).unwrap(), conic);

    let point = SncModel::new(vec![comp("X", 1)], [(vec![0], MotClass::one())]).unwrap();
    assert_eq!(milnor_fiber(&point, &SupportSelection::only([(vec![0], MotClass::one())])).unwrap(), MotClass::one());

    let empty = SncModel::new(vec![comp("E1", 1), comp("E2", 4)], []).unwrap();
    assert!(nearby_fiber(&empty).unwrap().is_zero());
}

#[test]
fn disjoint_components_add() {
    let a = cls("L - 1");
    let b = MotClass::symbol(ClassSymbol::mu_points(2));
    let both = SncModel::new(vec![comp("A", 1), comp("B", 2)], [(vec![0], a.clone()), (vec![1], b.clone())]).unwrap();
    assert_eq!(nearby_fiber(&both).unwrap(), &a + &b);
    assert_eq!(both.e(), 2);
}

#[test]
fn invalid_strata_are_rejected() {
    assert!(SncModel::new(vec![comp("E", 0)], []).is_err());
    assert!(SncModel::new(vec![comp("E", 1)], [(vec![1], MotClass::one())]).is_err());
    let m = node();
    assert!(vol_snc(&m, &SupportSelection::only([(vec![5], MotClass::one())])).is_err());
}

#[test]
fn only_single_strata_survive_at_l_equal_one() {
    // substitute 𝕃 = 1 and give every symbol a surrogate count
    let eval = |c: &MotClass| -> i64 {
        c.terms()
            .iter()
            .map(|(m, k)| k * m.symbols.iter().map(|s| s.to_string().len() as i64).product::<i64>())
            .sum()
    };
    for (a, b) in [(1, 1), (2, 3), (4, 6)] {
        let m = monomial_model(a, b);
        let singles: i64 = m.strata().iter().filter(|(j, _)| j.len() == 1).map(|(_, c)| eval(c)).sum();
        assert_eq!(eval(&nearby_fiber(&m).unwrap()), singles);
    }
}

#[test]
fn milnor_fiber_of_monomials() {
    for (a, b) in [(1u64, 1u64), (2, 1), (2, 2), (2, 4), (3, 6)] {
        let m = monomial_model(a, b);
        let g = a.gcd(&b);
        let origin = SupportSelection::only([(vec![0, 1], mu_orbit(g))]);
        let psi = milnor_fiber(&m, &origin).unwrap();
        let tropical = vol_affine_stratified(
            &StratifiedAffineProblem::level(&LaurentPoly::parse(2, &format!("x^{a}*y^{b}")).unwrap(), vec![Orthant::Open; 2])
                .unwrap(),
        )
        .unwrap();
        let primes: Vec<u64> = (2..200u64).filter(|q| is_prime(*q) && q % (a * b) == 1).take(3).collect();
        for q in primes {
            let expected = (1 - q as i128) * roots_of_unity(g, q);
            assert_eq!(realize_auto(&psi, q).unwrap(), expected, "x^{a} y^{b} at q={q}");
            assert_eq!(realize_auto(&tropical, q).unwrap(), expected, "tropical x^{a} y^{b} at q={q}");
        }
    }
}

#[test]
fn action_orders_are_checked() {
    let m = SncModel::new(vec![comp("E", 4)], [(vec![0], mu_orbit(3))]).unwrap();
    assert_eq!(m.warnings().len(), 1);
    assert!(monomial_model(2, 4).warnings().is_empty());
}

fn small_class() -> impl Strategy<Value = MotClass> {
    (-3i64..=3, 0u32..3, -3i64..=3).prop_map(|(a, k, b)| &MotClass::l_pow(k).scale(a) + &MotClass::int(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn additive_in_support(a in small_class(), b in small_class(), c in small_class(), d in small_class()) {
        let m = node();
        let s1 = SupportSelection::only([(vec![0], a.clone()), (vec![0, 1], d.clone())]);
        let s2 = SupportSelection::only([(vec![0], b.clone()), (vec![1], c.clone())]);
        let s12 = SupportSelection::only([(vec![0], &a + &b), (vec![1], c), (vec![0, 1], d)]);
        let lhs = &vol_snc(&m, &s1).unwrap() + &vol_snc(&m, &s2).unwrap();
        prop_assert_eq!(lhs, vol_snc(&m, &s12).unwrap());
    }
}
