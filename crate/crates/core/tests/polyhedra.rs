mod common;

use common::*;
use proptest::prelude::*;
use tropmot::polyhedra::*;
use tropmot::rat::{int, rat_vec};
use tropmot::Rat;

#[test]
fn emptiness_examples() {
    assert!(!is_empty(&cell(1, &[(&[1], 0, GE), (&[-1], 1, GE)])));
    assert!(is_empty(&cell(1, &[(&[1], 0, GT), (&[-1], 0, GT)])));
    assert!(is_empty(&cell(2, &[(&[1, 1], -1, EQ), (&[1, 0], -1, GT), (&[0, 1], 0, GT)])));
    assert!(!is_empty(&cell(0, &[])));
    assert!(is_empty(&cell(0, &[(&[], -1, GE)])));
}

#[test]
fn union_of_touching_intervals() {
    let a = set(1, &[&[(&[1], 0, GE), (&[-1], 1, GE)]]);
    let b = set(1, &[&[(&[1], -1, GE), (&[-1], 2, GE)]]);
    let expected = set(1, &[&[(&[1], 0, GE), (&[-1], 2, GE)]]);
    assert!(equals(&union(&a, &b), &expected).unwrap());
}

#[test]
fn complement_of_half_line() {
    let a = set(1, &[&[(&[1], 0, GE)]]);
    let c = complement(&a);
    assert_eq!(c.cells.len(), 1);
    assert_eq!(c.cells[0].constraints, vec![con(&[-1], 0, GT)]);
}

#[test]
fn puncturing_a_segment() {
    let seg = set(1, &[&[(&[1], 0, GE), (&[-1], 2, GE)]]);
    let point = set(1, &[&[(&[1], -1, EQ)]]);
    let d = difference(&seg, &point);
    assert_eq!(d.cells.len(), 2);
    assert!(d.contains(&[q(1, 2)]));
    assert!(!d.contains(&[int(1)]));
    assert!(d.contains(&[q(3, 2)]));
    assert!(boolean_op(&seg, &set(2, &[]), BoolOp::Union).is_err());
}

#[test]
fn faces_of_segment_and_triangle() {
    let seg = set(1, &[&[(&[1], 0, GE), (&[-1], 1, GE)]]);
    let cells = decompose(&seg);
    let mut dims: Vec<usize> = cells.iter().map(|c| c.dim).collect();
    dims.sort();
    assert_eq!(dims, [0, 0, 1]);

    let tri = set(2, &[&[(&[1, 0], 0, GE), (&[0, 1], 0, GE), (&[-1, -1], 1, GE)]]);
    let cells = decompose(&tri);
    let mut dims: Vec<usize> = cells.iter().map(|c| c.dim).collect();
    dims.sort();
    assert_eq!(dims, [0, 0, 0, 1, 1, 1, 2]);
    assert!(cells.iter().all(|c| c.bounded));
    assert!(decompose(&ConstructibleSet::empty(3)).is_empty());
}

#[test]
fn geometry_examples() {
    let g = cell_geometry(&cell(1, &[(&[1], 0, GE), (&[-1], 0, GE)])).unwrap();
    assert_eq!((g.dim, g.bounded), (0, true));
    assert_eq!(g.sample, vec![int(0)]);

    let g = cell_geometry(&cell(2, &[(&[1, -1], 0, EQ)])).unwrap();
    assert_eq!((g.dim, g.lineality_dim, g.recession_is_linear), (1, 1, true));

    let g = cell_geometry(&cell(2, &[(&[1, 0], 0, GT), (&[0, 1], 0, GT)])).unwrap();
    assert_eq!((g.dim, g.lineality_dim, g.recession_is_linear, g.bounded), (2, 0, false, false));

    assert_eq!(cell_geometry(&cell(1, &[(&[1], 0, GT), (&[-1], 0, GT)])), Err(tropmot::Error::EmptyCell));
}

#[test]
fn equality_examples() {
    let closed = set(1, &[&[(&[1], 0, GE), (&[-1], 1, GE)]]);
    let pieces = set(
        1,
        &[&[(&[1], 0, EQ)], &[(&[1], 0, GT), (&[-1], 1, GT)], &[(&[1], -1, EQ)]],
    );
    assert!(equals(&closed, &pieces).unwrap());
    let open = set(1, &[&[(&[1], 0, GT), (&[-1], 1, GT)]]);
    assert!(!equals(&open, &closed).unwrap());
    let tri = set(1, &[&[(&[1], 0, GT)], &[(&[1], 0, EQ)], &[(&[-1], 0, GT)]]);
    assert!(equals(&ConstructibleSet::universe(1), &tri).unwrap());
}

#[test]
fn image_examples() {
    let square = set(2, &[&[(&[1, 0], 0, GE), (&[-1, 0], 1, GE), (&[0, 1], 0, GE), (&[0, -1], 1, GE)]]);
    let px = AffineMap::projection(2, &[0]);
    let img = image_affine(&square, &px).unwrap();
    assert!(equals(&img, &set(1, &[&[(&[1], 0, GE), (&[-1], 1, GE)]])).unwrap());

    let open_tri = set(2, &[&[(&[1, 0], 0, GT), (&[0, 1], 0, GT), (&[-1, -1], 1, GT)]]);
    let img = image_affine(&open_tri, &px).unwrap();
    assert!(equals(&img, &set(1, &[&[(&[1], 0, GT), (&[-1], 1, GT)]])).unwrap());

    let diag = set(2, &[&[(&[1, -1], 0, EQ)]]);
    let sum = AffineMap::new(2, vec![rat_vec(&[1, 1])], vec![int(0)]).unwrap();
    assert!(equals(&image_affine(&diag, &sum).unwrap(), &ConstructibleSet::universe(1)).unwrap());
}

#[test]
fn preimage_examples() {
    let zero = set(1, &[&[(&[1], 0, EQ)]]);
    let diffmap = AffineMap::new(2, vec![rat_vec(&[1, -1])], vec![int(0)]).unwrap();
    assert!(equals(&preimage_affine(&zero, &diffmap).unwrap(), &set(2, &[&[(&[1, -1], 0, EQ)]])).unwrap());

    let ray = set(1, &[&[(&[1], 0, GE)]]);
    let affine = AffineMap::new(1, vec![rat_vec(&[2])], vec![int(1)]).unwrap();
    let pre = preimage_affine(&ray, &affine).unwrap();
    assert!(equals(&pre, &set(1, &[&[(&[2], 1, GE)]])).unwrap());

    let open = set(1, &[&[(&[1], 0, GT), (&[-1], 1, GT)]]);
    let constant = AffineMap::new(1, vec![rat_vec(&[0])], vec![int(5)]).unwrap();
    assert!(preimage_affine(&open, &constant).unwrap().cells.is_empty());
}

#[test]
fn circle_compact_examples() {
    let p1 = Fan::new(1, vec![cell(1, &[(&[1], 0, GE)]), cell(1, &[(&[-1], 0, GE)])]).unwrap();
    assert!(is_circle_compact(&p1, &[int(1)]).unwrap());
    let ray = Fan::new(1, vec![cell(1, &[(&[1], 0, GE)])]).unwrap();
    assert!(!is_circle_compact(&ray, &[int(-1)]).unwrap());
    let orthant = Fan::new(2, vec![cell(2, &[(&[1, 0], 0, GE), (&[0, 1], 0, GE)])]).unwrap();
    assert!(is_circle_compact(&orthant, &pt(&[1, 1])).unwrap());
    assert!(Fan::new(1, vec![cell(1, &[(&[1], -1, GE)])]).is_err());
}

/// Random bounded cell with small coefficients inside the box [-3, 3]^n.
fn arb_cell(n: usize, max_extra: usize) -> impl Strategy<Value = BasicCell> {
    let row = (prop::collection::vec(-3i64..=3, n), -6i64..=6, 0u8..3);
    prop::collection::vec(row, 0..=max_extra).prop_map(move |rows| {
        let mut cons = Vec::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            cons.push(con(&e, 3, GE));
            e[i] = -1;
            cons.push(con(&e, 3, GE));
        }
        for (a, k, r) in rows {
            let rel = [EQ, GE, GT][r as usize];
            cons.push(con(&a, k, rel));
        }
        BasicCell::new(n, cons).unwrap()
    })
}

fn arb_set(n: usize) -> impl Strategy<Value = ConstructibleSet> {
    prop::collection::vec(arb_cell(n, 3), 0..3).prop_map(move |cells| ConstructibleSet::new(n, cells).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn samples_satisfy_constraints(c in arb_cell(3, 6)) {
        if let Some(p) = find_point(3, &c.constraints, SampleRule::Midpoint) {
            prop_assert!(c.contains(&p));
            let g = cell_geometry(&c).unwrap();
            prop_assert!(g.contains(&g.sample));
            prop_assert!(c.contains(&g.sample));
        } else {
            prop_assert!(is_empty(&c));
        }
    }

    #[test]
    fn emptiness_agrees_with_vertex_oracle(c in arb_cell(2, 4)) {
        prop_assert_eq!(!is_empty(&c), oracle_nonempty(&c));
    }

    #[test]
    fn decomposition_partitions_the_set(s in arb_set(2)) {
        let cells = decompose(&s);
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                prop_assert!(is_empty(&a.carrier.meet(&b.carrier)));
            }
            prop_assert!(a.bounded);
        }
        let union = ConstructibleSet::new(2, cells.iter().map(|c| c.carrier.clone()).collect()).unwrap();
        prop_assert!(equals(&union, &s).unwrap());
    }

    #[test]
    fn de_morgan(a in arb_set(2), b in arb_set(2)) {
        let lhs = complement(&union(&a, &b));
        let rhs = intersect(&complement(&a), &complement(&b));
        prop_assert!(equals(&lhs, &rhs).unwrap());
    }

    #[test]
    fn image_of_preimage(s in arb_set(2), m in prop::collection::vec(-2i64..=2, 6), t in prop::collection::vec(-2i64..=2, 2)) {
        let map = AffineMap::new(3, vec![rat_vec(&m[..3]), rat_vec(&m[3..])], rat_vec(&t)).unwrap();
        let back = image_affine(&preimage_affine(&s, &map).unwrap(), &map).unwrap();
        prop_assert!(is_subset(&back, &s).unwrap());
        let minor = |i: usize, j: usize| m[i] * m[3 + j] - m[j] * m[3 + i];
        let surjective = minor(0, 1) != 0 || minor(0, 2) != 0 || minor(1, 2) != 0;
        if surjective {
            prop_assert!(equals(&back, &s).unwrap());
        }
    }
}

/// Candidate points for a bounded 2-D cell: every intersection of two
/// constraint lines, midpoints of pairs and centroids of triples of those.
/// A nonempty bounded relatively open polygon, segment or point contains one
/// of them (centroid of three hull vertices, midpoint of the two endpoints,
/// or the vertex itself).
fn oracle_nonempty(c: &BasicCell) -> bool {
    let lines: Vec<&AffineForm> = c.constraints.iter().map(|k| &k.form).collect();
    let mut verts: Vec<Vec<Rat>> = Vec::new();
    for (i, f) in lines.iter().enumerate() {
        for g in &lines[i + 1..] {
            let (a, b, e) = (&f.coeffs[0], &f.coeffs[1], &f.constant);
            let (cc, d, h) = (&g.coeffs[0], &g.coeffs[1], &g.constant);
            let det = a * d - b * cc;
            if det == int(0) {
                continue;
            }
            // a x + b y = -e, c x + d y = -h
            let x = (-(e * d) + b * h) / &det;
            let y = (-(a * h) + cc * e) / &det;
            let v = vec![x, y];
            if c.constraints.iter().all(|k| k.form.eval(&v) >= int(0) || k.rel == EQ) && !verts.contains(&v) {
                verts.push(v);
            }
        }
    }
    let mut cands = verts.clone();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            cands.push(vec![(&verts[i][0] + &verts[j][0]) / int(2), (&verts[i][1] + &verts[j][1]) / int(2)]);
            for k in j + 1..verts.len() {
                cands.push(vec![
                    (&verts[i][0] + &verts[j][0] + &verts[k][0]) / int(3),
                    (&verts[i][1] + &verts[j][1] + &verts[k][1]) / int(3),
                ]);
            }
        }
    }
    cands.iter().any(|p| c.contains(p))
}
