use proptest::prelude::*;
use sizeable_core::gamma::{build_gamma, GammaVertex};
use sizeable_core::group::abelianization;
use sizeable_core::morse::*;
use sizeable_core::relators::*;

fn context(t: u32) -> RelatorContext {
    RelatorContext::new(&build_gamma(), t).unwrap()
}

#[test]
fn all_relators_at_t3() {
    let ctx = context(3);
    let records = ctx.all_relators(0).unwrap();
    assert_eq!(records.len(), 24);
    let full = H1Oracle::new(&ctx.z, None);
    for r in &records {
        let v = r.vertex;
        assert_eq!(r.side, Slab::for_vertex(v));
        assert!(r.slab.is_closed());
        let (lo, hi) = r.slab.level_range();
        assert!(r.side.contains(lo) && r.side.contains(hi), "{v}: {lo}..{hi}");
        r.stats.check_bound().unwrap();
        assert!(!r.word.is_empty(), "{v}");

        let before = r.initial.chain(&ctx.z).unwrap();
        let after = r.slab.chain(&ctx.z).unwrap();
        assert!(full.same_class(&before, &after), "{v}");
        assert!(H1Oracle::new(&ctx.z, Some(v)).same_class(&before, &after), "{v}");
        assert_eq!(word_chain(&ctx.z, &ctx.lg, &r.word, r.side), after, "{v}");
    }
}

#[test]
fn seeds_agree_up_to_h1_class() {
    let ctx = context(2);
    let full = H1Oracle::new(&ctx.z, None);
    let runs: Vec<Vec<RelatorRecord>> = (0..3).map(|seed| ctx.all_relators(seed).unwrap()).collect();
    for i in 0..runs[0].len() {
        let base = runs[0][i].slab.chain(&ctx.z).unwrap();
        for run in &runs[1..] {
            let r = &run[i];
            let c = r.slab.chain(&ctx.z).unwrap();
            assert!(r.word == runs[0][i].word || full.same_class(&base, &c), "{}", r.vertex);
        }
    }
    // Reruns with one seed are identical.
    let again = ctx.all_relators(1).unwrap();
    for (a, b) in again.iter().zip(&runs[1]) {
        assert_eq!(a.word, b.word);
    }
}

#[test]
fn initial_loops_are_deck_equivariant() {
    let ctx = context(3);
    for &v in ctx.z.vertices() {
        let dir = if v.level > 0 { Direction::Desc } else { Direction::Asc };
        let w = v.shifted(1);
        let (Ok(a), Ok(b)) = (initial_link_loop(&ctx.z, v, dir), initial_link_loop(&ctx.z, w, dir)) else {
            continue;
        };
        assert_eq!(b.start, a.start.shifted(1));
        assert!(a.labels().eq(b.labels()));
        assert_eq!(a.len(), 36);
    }
}

#[test]
fn abelianized_words_agree_with_slab_classes() {
    let ctx = context(2);
    let records = ctx.all_relators(0).unwrap();
    let bp = presentation(&ctx, &records, 3, &[1], 0).unwrap();
    assert_eq!(bp.presentation.relators.len(), 16);
    assert_eq!(bp.presentation.flagged_levels(), vec![1]);
    let ab = abelianization(&bp.presentation);
    assert!(ab.snf.is_chain());
    assert_eq!(ab.free_rank + ab.snf.rank(), 35);
    assert!(presentation(&ctx, &records, 3, &[5], 0).is_err());
    assert!(presentation(&ctx, &records, 3, &[0], 0).is_err());
}

/// Random walks inside `Z_2` from the basepoint.
fn walk() -> impl Strategy<Value = EdgePath> {
    prop::collection::vec(0usize..36, 0..60).prop_map(|choices| {
        let mut v = CoverVertex::basepoint();
        let mut labels = vec![];
        for c in choices {
            let x = GammaVertex::from_index(c);
            let next = v.step(x);
            if next.level.abs() <= 4 {
                labels.push(x);
                v = next;
            }
        }
        EdgePath::new(CoverVertex::basepoint(), labels)
    })
}

proptest! {
    #[test]
    fn reduction_keeps_chain_and_drops_backtracks(path in walk()) {
        let z = build_truncation(&build_gamma(), 2).unwrap();
        let doubled = {
            // Walk out and straight back: a null-homologous closed path.
            let mut labels: Vec<GammaVertex> = path.labels().collect();
            labels.extend(path.reversed().labels());
            EdgePath::new(path.start, labels)
        };
        prop_assert!(doubled.is_closed());
        let mut reduced = doubled.clone();
        reduced.reduce();
        prop_assert!(reduced.is_empty());

        let mut p = path.clone();
        p.reduce();
        let labels: Vec<GammaVertex> = p.labels().collect();
        prop_assert!(labels.windows(2).all(|w| w[0] != w[1]));
        if !path.is_closed() {
            prop_assert_eq!(p.start, path.start);
            prop_assert_eq!(p.end(), path.end());
            prop_assert_eq!(p.chain(&z).unwrap(), path.chain(&z).unwrap());
        }
    }
}
