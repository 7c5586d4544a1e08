use std::sync::OnceLock;

use arbor_core::enumerate::Enumerator;
use arbor_core::hopf::{delta_bck, deshuffle_forest, GuinOudom, H2};
use arbor_core::iso::psi::{Leftmost, Rightmost};
use arbor_core::iso::{CfBasis, NormalForm, Sign, Theta};
use arbor_core::ops::{deformed_graft, graft, PreLieProduct};
use arbor_core::multiindex::MultiIndex;
use arbor_core::parse::parse_forest;
use arbor_core::tree::{Forest, Planted, Tree};
use arbor_core::vect::{q, Vect};
use arbor_core::word::{shuffle, Letter, Word};
use arbor_core::workspace::Workspace;
use proptest::prelude::*;
use proptest::sample::Index;

fn small() -> Workspace {
    Workspace::new(2).with_caps(1, 1).with_max_edges(4)
}

fn forests() -> &'static Vec<Vec<Forest>> {
    static F: OnceLock<Vec<Vec<Forest>>> = OnceLock::new();
    F.get_or_init(|| {
        let mut en = Enumerator::new(small().bounds());
        (0..=3).map(|e| if e == 0 { vec![Forest::unit(2)] } else { en.forests(e) }).collect()
    })
}

fn trees() -> &'static Vec<Vec<Tree>> {
    static T: OnceLock<Vec<Vec<Tree>>> = OnceLock::new();
    T.get_or_init(|| {
        let mut en = Enumerator::new(small().bounds());
        (0..=2).map(|e| en.trees(e).to_vec()).collect()
    })
}

fn pick<T: Clone>(v: &[T], i: &Index) -> T {
    v[i.index(v.len())].clone()
}

fn forest(grade: usize, i: &Index) -> Forest {
    pick(&forests()[grade], i)
}

fn rev_children(t: &Tree) -> Tree {
    let mut cs: Vec<Planted> = t.children().iter().map(|p| Planted::new(p.edge.clone(), rev_children(&p.body))).collect();
    cs.reverse();
    Tree::new(t.dec().clone(), cs)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn canonical_forms_round_trip(e in 0usize..=3, i: Index) {
        let f = forest(e, &i);
        let text = format!("{f}");
        prop_assert_eq!(parse_forest(&text, &small()).unwrap(), f.clone());
        prop_assert_eq!(rev_children(&f.as_tree()), f.as_tree());
    }

    #[test]
    fn counit_sides_of_bck(e in 0usize..=3, i: Index) {
        let f = forest(e, &i);
        let d = delta_bck(&f).unwrap();
        let one = Forest::unit(2);
        prop_assert_eq!(d.coeff(&(f.clone(), one.clone())), q(1));
        prop_assert_eq!(d.coeff(&(one, f.clone())), q(1));
        for ((l, r), _) in d.iter() {
            prop_assert_eq!(l.edges() + r.edges(), f.edges());
        }
    }

    #[test]
    fn deshuffle_is_cocommutative(e in 0usize..=3, i: Index) {
        let f = forest(e, &i);
        let d = deshuffle_forest(&f);
        let flipped: Vect<(Forest, Forest)> = d.iter().map(|((a, b), c)| ((b.clone(), a.clone()), c.clone())).collect();
        prop_assert_eq!(d, flipped);
    }

    #[test]
    fn deformation_only_adds_lower_terms(a in 0usize..=2, b in 0usize..=1, i: Index, j: Index, l: Index) {
        let ws = small();
        let labels = ws.bounds().labels;
        let (s, t, lab) = (pick(&trees()[a], &i), pick(&trees()[b], &j), pick(&labels, &l));
        let plain = graft(&ws, &s, &lab, &t).unwrap();
        let deformed = deformed_graft(&ws, &s, &lab, &t).unwrap();
        for (x, c) in plain.iter() {
            prop_assert_eq!(&deformed.coeff(x), c);
        }
        let sc = &ws.scaling;
        let top = plain.keys().map(|x| x.weighted_grade(sc) + x.weighted_node_total(sc)).max().unwrap();
        for x in deformed.keys().filter(|x| !plain.contains(x)) {
            prop_assert!(x.weighted_grade(sc) + x.weighted_node_total(sc) < top);
        }
    }

    #[test]
    fn deformed_star_is_associative(i: Index, j: Index, k: Index, e in 1usize..=2) {
        let go = GuinOudom::new(PreLieProduct::deformed(&small()));
        let (a, b, c) = (forest(1, &i), forest(1, &j), forest(e, &k));
        let l = go.star_vect(&go.star(&a, &b).unwrap(), &Vect::basis(c.clone())).unwrap();
        let r = go.star_vect(&Vect::basis(a), &go.star(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn theta_is_invertible(e in 1usize..=3, i: Index) {
        let th = Theta::new(&small());
        let f = forest(e, &i);
        let back = th.phi_inv(&th.phi(&Vect::basis(f.clone())).unwrap()).unwrap();
        prop_assert_eq!(back, Vect::basis(f));
    }

    #[test]
    fn star2_is_associative(i: Index, k: Index, x in 0usize..2) {
        let ws = Workspace::new(2).with_caps(3, 1).with_total_caps(Some(3), Some(1)).with_max_edges(3);
        let h2 = H2::new(&ws);
        let (a, b, c) = (forest(1, &i), Forest::poly(MultiIndex::unit(2, x)), forest(1, &k));
        for (p, q, r) in [(&a, &b, &c), (&b, &a, &c), (&a, &c, &b)] {
            let l = h2.star2_vect(&h2.star2(p, q).unwrap(), &Vect::basis(r.clone())).unwrap();
            let rr = h2.star2_vect(&Vect::basis(p.clone()), &h2.star2(q, r).unwrap()).unwrap();
            prop_assert_eq!(l, rr);
        }
    }

    #[test]
    fn shuffle_is_commutative(u in proptest::collection::vec(0u8..3, 0..4), v in proptest::collection::vec(0u8..3, 0..4)) {
        let (u, v) = (Word(u), Word(v));
        prop_assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
        let total: i64 = shuffle(&u, &v).iter().map(|(_, c)| c.to_integer().try_into().unwrap_or(0i64)).sum();
        let n = u.len() + v.len();
        let binom = (1..=u.len()).fold(1i64, |acc, k| acc * (n - u.len() + k) as i64 / k as i64);
        prop_assert_eq!(total, binom);
    }
}

thread_local! {
    static CF: &'static CfBasis = {
        let ws = Workspace::new(2).with_caps(3, 1).with_total_caps(Some(3), Some(1)).with_max_edges(4);
        let cf = Box::leak(Box::new(CfBasis::new(&ws)));
        cf.build(1).unwrap();
        cf
    };
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normal_forms_are_normal_and_stable(xs in proptest::collection::vec(0u8..2, 0..3), ls in proptest::collection::vec(0u32..16, 1..3)) {
        let nf = NormalForm::new(CF.with(|c| *c), Sign::Minus);
        let mut w: Vec<Letter> = xs.iter().map(|&i| Letter::X(i)).collect();
        w.extend(ls.iter().map(|&id| Letter::L(id)));
        let v = Vect::basis(Word(w));
        let a = nf.normal_form(&v, &mut Leftmost);
        prop_assume!(a.is_ok());
        let a = a.unwrap();
        prop_assert!(a.keys().all(NormalForm::is_normal));
        prop_assert_eq!(nf.normal_form(&a, &mut Rightmost).unwrap(), a.clone());
        prop_assert_eq!(nf.normal_form(&v, &mut Rightmost).unwrap(), a);
    }
}
