mod common;

use common::*;
use hierbrack::brackets::{BracketSymbol, Label, Shape, Strength};
use hierbrack::decoder::{decode_indexed, decode_robust};
use hierbrack::encoder::{encode, LabelSequence, Scheme};
use hierbrack::ropecover::{
    all_proper_rope_covers, fourbit_rope_cover, is_compact, is_proper, is_rope_cover,
    naive_rope_cover, proper_rope_cover,
};
use hierbrack::testkit::{enumerate_trees, random_tree};
use hierbrack::Arc;
use proptest::prelude::*;

fn arc() -> impl Strategy<Value = Arc> {
    (0usize..12, 1usize..12)
        .prop_filter("no self-loops", |(h, d)| h != d)
        .prop_map(|(h, d)| Arc::new(h, d))
}

fn symbol() -> impl Strategy<Value = BracketSymbol> {
    let shape = prop_oneof![
        Just(Shape::OpenRight),
        Just(Shape::CloseRight),
        Just(Shape::OpenLeft),
        Just(Shape::CloseLeft)
    ];
    let strength = prop_oneof![Just(Strength::Super), Just(Strength::Semi)];
    (shape, strength, prop_oneof![4 => Just(0u32), 1 => 1u32..4]).prop_map(
        |(shape, strength, index)| BracketSymbol {
            shape,
            strength,
            index,
        },
    )
}

fn label_sequence() -> impl Strategy<Value = LabelSequence> {
    let label = || prop::collection::vec(symbol(), 0..5).prop_map(Label);
    (
        prop::collection::vec(label(), 1..14),
        prop::option::of(label()),
    )
        .prop_map(|(labels, root)| {
            let mut seq = LabelSequence::from_labels(labels);
            seq.root = root;
            seq
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn crossing_and_covering_exclude_each_other(a in arc(), b in arc()) {
        prop_assert_eq!(a.crosses(&b), b.crosses(&a));
        if a.crosses(&b) {
            prop_assert!(!a.covers(&b) && !b.covers(&a));
        }
        if a.leans_on(&b) {
            prop_assert!(b.covers(&a));
            // only the reverse arc over the same span leans back
            prop_assert_eq!(b.leans_on(&a), a.len() == b.len());
        }
        prop_assert!(a.covers(&a));
        prop_assert!(!a.leans_on(&a));
    }

    #[test]
    fn robust_decoding_always_yields_a_tree(seq in label_sequence()) {
        let decoded = decode_robust(&seq, true);
        prop_assert_eq!(decoded.graph.n(), seq.n());
        prop_assert!(decoded.graph.is_tree(), "{} gave {:?}", seq, decoded.graph);
    }

    #[test]
    fn plain_robust_decoding_stays_in_range(seq in label_sequence()) {
        let decoded = decode_robust(&seq, false);
        for a in decoded.graph.arcs() {
            prop_assert!(a.head <= seq.n() && a.dep <= seq.n() && a.dep != 0);
        }
    }

    #[test]
    fn random_trees_round_trip(n in 1usize..16, seed in any::<u64>()) {
        let t = random_tree(n, seed, true);
        let seq = encode(&t, Scheme::OptimalNonProjective).unwrap();
        prop_assert_eq!(decode_indexed(&seq), t);
    }

    #[test]
    fn covers_are_valid(n in 1usize..16, seed in any::<u64>()) {
        let t = random_tree(n, seed, true);
        let proper = proper_rope_cover(&t);
        prop_assert!(is_rope_cover(&t, proper.structural()));
        prop_assert!(is_proper(proper.structural()));
        prop_assert!(is_compact(proper.structural()));
        prop_assert!(proper.validate(&t).is_ok());
        prop_assert!(thickness_oracle(n, proper.structural()) >= 1);
    }
}

#[test]
fn projectivity_checks_agree_with_oracle() {
    for n in 1..=6 {
        for t in enumerate_trees(n, false).unwrap() {
            let oracle = projective_oracle(&t);
            assert_eq!(t.is_projective().unwrap(), oracle, "{:?}", t.heads());
            assert_eq!(t.is_projective_by_descendants().unwrap(), oracle);
            assert_eq!(!t.has_crossing(), oracle, "{:?}", t.heads());
        }
    }
}

#[test]
fn proper_cover_is_unique() {
    for n in 1..=6 {
        for t in enumerate_trees(n, false).unwrap() {
            let mut greedy = proper_rope_cover(&t).structural().to_vec();
            greedy.sort();
            let all = all_proper_rope_covers(&t).unwrap();
            assert_eq!(all.len(), 1, "{:?}", t.heads());
            let mut only = all[0].clone();
            only.sort();
            assert_eq!(only, greedy);
        }
    }
}

#[test]
fn cover_sizes_are_ordered() {
    for n in 1..=6 {
        for t in enumerate_trees(n, true).unwrap() {
            let proper = proper_rope_cover(&t).len();
            let fourbit = fourbit_rope_cover(&t);
            let naive = naive_rope_cover(&t);
            assert!(fourbit.validate(&t).is_ok() && naive.validate(&t).is_ok());
            assert!(is_compact(fourbit.structural()));
            assert!(proper <= fourbit.len() && fourbit.len() <= naive.len());
            assert_eq!(naive.len(), t.arcs().len());
        }
    }
}
