mod common;

use common::*;
use indtac::kernel::{Expr, MetaId};
use proptest::prelude::*;

#[test]
fn universe_size() {
    // d(k) = 1 + d(k-1) + d(k-1)^2 counts terms of depth at most k.
    let d = (0..4).fold(1usize, |d, _| 1 + d + d * d);
    assert_eq!(Universe::new(4).len(), d);
    assert_eq!(terms(4, &[zero()]).len(), d);
}

#[test]
fn small_problems_agree_with_enumeration() {
    let (count, failures) = oracle_table(2, 2);
    assert_eq!(count, 13 * 243);
    assert!(failures.is_empty(), "{} of {count} disagree:\n{}", failures.len(), failures.join("\n"));
}

/// Every pair of depth at most 3: about eleven million problems, so only
/// run on request.
#[test]
#[ignore]
fn all_depth_three_problems_agree_with_enumeration() {
    let (count, failures) = oracle_table(3, 3);
    assert!(failures.is_empty(), "{} of {count} disagree:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn unused_meta_is_not_unique() {
    let env = t3_env();
    let universe = Universe::new(4);
    let a = succ(zero());
    check_against_oracle(&env, &a, &succ(meta(0)), &[MetaId(0), MetaId(1)], &universe).unwrap();
    check_against_oracle(&env, &a, &a, &[MetaId(0)], &universe).unwrap();
}

fn ground(depth: u32) -> impl Strategy<Value = Expr> {
    Just(zero()).prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![inner.clone().prop_map(succ), (inner.clone(), inner).prop_map(|(a, b)| pair(a, b))]
    })
}

fn pattern(depth: u32) -> impl Strategy<Value = Expr> {
    prop_oneof![Just(zero()), Just(meta(0)), Just(meta(1))].prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![inner.clone().prop_map(succ), (inner.clone(), inner).prop_map(|(a, b)| pair(a, b))]
    })
}

/// Replaces some subterms of `a` by metas, so that solvable problems are
/// common.
fn punch(a: &Expr, holes: &[bool], i: &mut usize) -> Expr {
    let k = *i;
    *i += 1;
    if holes.get(k).copied().unwrap_or(false) {
        return meta((k % 2) as u64);
    }
    let (h, args) = a.app_parts();
    Expr::mk_app(h, args.iter().map(|x| punch(x, holes, i)).collect::<Vec<_>>())
}

fn metas_of(b: &Expr, extra: bool) -> Vec<MetaId> {
    let mut ms: Vec<MetaId> = b.metas().into_iter().collect();
    if extra && !ms.contains(&MetaId(1)) {
        ms.push(MetaId(1));
    }
    ms.sort();
    ms
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_problems_agree_with_enumeration(a in ground(3), b in pattern(3), extra in any::<bool>()) {
        let env = t3_env();
        let universe = Universe::new(4);
        let ms = metas_of(&b, extra);
        prop_assume!(ms.len() <= 2);
        check_against_oracle(&env, &a, &b, &ms, &universe).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn punched_problems_agree_with_enumeration(a in ground(3), holes in proptest::collection::vec(any::<bool>(), 12)) {
        let env = t3_env();
        let universe = Universe::new(4);
        let b = punch(&a, &holes, &mut 0);
        let ms = metas_of(&b, false);
        check_against_oracle(&env, &a, &b, &ms, &universe).map_err(TestCaseError::fail)?;
    }
}
