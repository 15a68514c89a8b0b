use sizeable_core::complex::{ComplexVertex, SquareCell};
use sizeable_core::gamma::*;
use sizeable_core::morse::*;

fn in_range(level: i64, t: u32) -> bool {
    level.abs() <= 2 * t as i64
}

/// Brute-force cell counts: every (base cell, level) pair whose cover cell
/// stays inside the level range.
fn count_oracle(t: u32) -> (usize, usize, usize) {
    let lo = -2 * t as i64 - 2;
    let hi = 2 * t as i64 + 2;
    let mut v = 0;
    let mut e = 0;
    for base in ComplexVertex::all() {
        for level in lo..=hi {
            let Ok(u) = CoverVertex::new(base, level) else { continue };
            if !in_range(level, t) {
                continue;
            }
            v += 1;
            // Edges counted at their lower end.
            e += GammaVertex::all().filter(|&x| !u.descends(x) && in_range(level + 1, t)).count();
        }
    }
    let g = build_gamma();
    let mut f = 0;
    for cell in squares_of_gamma(&g) {
        for level in lo..=hi {
            // The bottom corner is the one both sides leave upwards.
            for c in cell.corners() {
                let Ok(b) = CoverVertex::new(c, level) else { continue };
                let a_up = !b.descends(cell.a);
                let b_up = !b.descends(cell.b);
                if a_up && b_up && in_range(level, t) && in_range(level + 2, t) {
                    f += 1;
                }
            }
        }
    }
    (v, e, f)
}

fn squares_of_gamma(g: &ModGraph) -> Vec<SquareCell> {
    g.edges()
        .map(|(u, v)| if u.factor() == Factor::A { SquareCell::new(u, v) } else { SquareCell::new(v, u) })
        .collect()
}

#[test]
fn counts_match_oracle_and_closed_forms() {
    let g = build_gamma();
    assert!(build_truncation(&g, 0).is_err());
    for t in 1..=6 {
        let z = build_truncation(&g, t).unwrap();
        assert_eq!(z.counts(), count_oracle(t), "t = {t}");
        assert_eq!(z.counts(), expected_counts(t), "t = {t}");
    }
}

#[test]
fn truncations_nest_and_translate() {
    let g = build_gamma();
    let zs: Vec<Truncation> = (1..=4).map(|t| build_truncation(&g, t).unwrap()).collect();
    for t in 0..3 {
        assert!(zs[t].embeds_shifted(&zs[t + 1], 0));
        assert!(zs[t].embeds_shifted(&zs[t + 1], 1));
        assert!(zs[t].embeds_shifted(&zs[t + 1], -1));
        assert!(!zs[t + 1].embeds_shifted(&zs[t], 0));
    }
}

#[test]
fn level_zero_graph() {
    let g = build_gamma();
    let z = build_truncation(&g, 1).unwrap();
    let lg = level_graph(&z).unwrap();
    assert_eq!(lg.vertices.len(), 2);
    assert_eq!(lg.edges.len(), 36);
    assert_eq!(lg.tree.len(), 1);
    assert_eq!(lg.cycle_rank(), 35);
    assert_eq!(lg.generator_count(), 35);
    // Level graph is the same for every t.
    for t in 2..=4 {
        let lt = level_graph(&build_truncation(&g, t).unwrap()).unwrap();
        assert_eq!(lt.generator_count(), 35);
        assert_eq!(lt.to_text(), lg.to_text());
    }
}

#[test]
fn directed_links_in_z4() {
    let g = build_gamma();
    let z = build_truncation(&g, 4).unwrap();
    let mut checked = 0;
    for &v in z.vertices() {
        for dir in [Direction::Asc, Direction::Desc] {
            match asc_desc_link(&z, v, dir) {
                Ok(link) => {
                    assert_eq!(link.cycle.len(), 18, "{v} {dir}");
                    assert_eq!(link.edges.len(), 18);
                    assert_eq!(link.squares.len(), 18);
                    assert!(link.matches(&g), "{v} {dir}");
                    checked += 1;
                }
                Err(_) => assert!(!z.contains_level(v.level + 2 * dir.delta()), "{v} {dir}"),
            }
        }
    }
    // Levels -8..=6 ascend and -6..=8 descend: 15 levels each, two vertices per level.
    assert_eq!(checked, 2 * 15 * 2);
}

#[test]
fn branch_vertices() {
    let b = branch_set(4);
    assert_eq!(b.len(), 4);
    for (i, bv) in b.iter().enumerate() {
        let v = bv.vertex();
        assert_eq!(v.level, 2 * (i as i64 + 1));
        assert_eq!(v.base, ComplexVertex::new(Sign::Plus, Sign::Plus));
        assert_eq!(BranchVertex::of(v), Some(*bv));
    }
    assert_eq!(BranchVertex::of(CoverVertex::basepoint()), None);
}
