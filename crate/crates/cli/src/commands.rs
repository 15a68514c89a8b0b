//! One function per subcommand. Each returns its report and the artifacts to
//! write; inputs are read here, outputs are written by the caller.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::rc::Rc;

use serde_json::{json, Value};
use sizeable_core::complex::{build_x_gamma, ComplexVertex};
use sizeable_core::gamma::*;
use sizeable_core::group::hom::HomFile;
use sizeable_core::group::*;
use sizeable_core::morse::*;
use sizeable_core::relators::*;

use crate::config::{CliError, RunConfig};
use crate::presentation_file::PresentationFile;
use crate::report::{sha256_hex, CertReport};

pub struct Artifact {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

pub struct Output {
    /// File stem for the report under the output directory.
    pub name: String,
    pub report: CertReport,
    pub artifacts: Vec<Artifact>,
}

impl Output {
    fn new(name: impl Into<String>, report: CertReport) -> Output {
        Output {
            name: name.into(),
            report,
            artifacts: Vec::new(),
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn w_slug(w: &[u32]) -> String {
    if w.is_empty() {
        "none".into()
    } else {
        strings(w).join("_")
    }
}

/// Edge rule set for `gamma verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Rules {
    Standard,
    /// The variant with `a - b ∈ {0, 2}` on A⁻/B⁺ edges.
    PlusTwo,
}

impl Rules {
    fn edge_rules(self) -> EdgeRules {
        match self {
            Rules::Standard => EdgeRules::standard(),
            Rules::PlusTwo => EdgeRules::plus_two_variant(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Rules::Standard => "standard",
            Rules::PlusTwo => "plus-two",
        }
    }
}

fn sign_pair(s: Sign, t: Sign) -> String {
    format!("A{s}B{t}")
}

pub fn gamma_verify(rules: Rules) -> Output {
    let er = rules.edge_rules();
    let mut differences = BTreeMap::new();
    for s in Sign::BOTH {
        for t in Sign::BOTH {
            differences.insert(sign_pair(s, t), er.differences(s, t).to_vec());
        }
    }
    let mut r = CertReport::new("gamma verify", &json!({"rules": rules.name(), "differences": differences}));
    let g = build_gamma_with(&er);
    let degrees: BTreeMap<String, usize> = g.vertices().map(|v| (v.to_string(), g.degree(v))).collect();
    r.check("vertices_36", g.vertex_count() == 36)
        .check("edges_72", g.edge_count() == 72)
        .check_with("four_regular", g.regular_degree() == Some(4), || {
            json!(degrees.iter().filter(|(_, &d)| d != 4).collect::<BTreeMap<_, _>>())
        })
        .check("bipartite_a_b", g.is_bipartite_ab())
        .check("connected", g.is_connected());
    let shortest = shortest_cycle(&g);
    let girth = shortest.as_ref().map(|c| c.len());
    r.check_with("girth_at_least_5", girth.is_none_or(|l| l >= 5), || {
        json!(strings(&shortest.as_ref().unwrap().vertices))
    });
    let mut cycles = BTreeMap::new();
    for s in Sign::BOTH {
        for t in Sign::BOTH {
            let key = sign_pair(s, t);
            match special_cycle(&g, s, t) {
                Ok(c) => {
                    r.check_with(format!("special_{key}_single_18_cycle"), c.len() == 18, || json!(c.len()));
                    cycles.insert(key, strings(&c.vertices));
                }
                Err(e) => {
                    r.check_with(format!("special_{key}_single_18_cycle"), false, || json!(e.to_string()));
                }
            }
        }
    }
    r.derive("vertices", g.vertex_count())
        .derive("edges", g.edge_count())
        .derive("degree", g.regular_degree())
        .derive("girth", girth)
        .derive("shortest_cycle", shortest.map(|c| strings(&c.vertices)))
        .derive("special_cycles", cycles);
    let name = match rules {
        Rules::Standard => "gamma-verify".to_string(),
        other => format!("gamma-verify-{}", other.name()),
    };
    Output::new(name, r)
}

pub fn gamma_cover(p: u32) -> Result<Output, CliError> {
    RunConfig {
        p: Some(p),
        ..Default::default()
    }
    .validate()?;
    let g = build_gamma();
    let designated = default_designated();
    let designated_names: Vec<[String; 2]> = designated.iter().map(|(u, v)| [u.to_string(), v.to_string()]).collect();
    let mut r = CertReport::new("gamma cover", &json!({"p": p, "designated": designated_names}));
    let cover = build_link_cover(&g, p, designated).map_err(compute)?;
    let pu = p as usize;
    r.check("vertices_36p", cover.vertices().len() == 36 * pu)
        .check("edges_72p", cover.edges().len() == 72 * pu)
        .check_with("connected", cover.is_connected(), || json!(cover.component_count()))
        .check("deck_free_automorphism", cover.deck_is_free_automorphism())
        .check_with("deck_order_p", cover.deck_order() == p, || json!(cover.deck_order()));
    let mut preimages = BTreeMap::new();
    let mut weights = BTreeMap::new();
    for s in Sign::BOTH {
        let key = sign_pair(s, s);
        let sizes = cover.special_preimage_cycles(s, s);
        r.check_with(format!("preimage_{key}_single_{}_cycle", 18 * pu), sizes == Some(vec![18 * pu]), || {
            json!(sizes)
        });
        preimages.insert(key.clone(), sizes);
        let cert = special_cycle(&g, s, s).map_err(compute)?;
        weights.insert(key, cover.cycle_weight(&cert));
    }
    r.derive("p", p)
        .derive("vertices", cover.vertices().len())
        .derive("edges", cover.edges().len())
        .derive("components", cover.component_count())
        .derive("deck_order", cover.deck_order())
        .derive("designated", designated_names)
        .derive("special_cycle_weights", weights)
        .derive("special_preimage_cycles", preimages);
    Ok(Output::new(format!("gamma-cover-p{p}"), r))
}

pub fn complex_verify() -> Result<Output, CliError> {
    let g = build_gamma();
    let mut r = CertReport::new("complex verify", &json!({"gamma_sha256": sha256_hex(g.to_text().as_bytes())}));
    let x = build_x_gamma(&g).map_err(compute)?;
    let counts = (x.vertex_count(), x.edge_count(), x.square_count());
    r.check_with("counts_4_72_72", counts == (4, 72, 72), || json!(counts))
        .check_with("euler_characteristic_4", x.euler_characteristic() == 4, || json!(x.euler_characteristic()))
        .check("attaching_maps_consistent", x.attaching_maps_consistent());
    let mut links = BTreeMap::new();
    for v in ComplexVertex::all() {
        let link = x.vertex_link(v.index());
        let size = (link.vertex_count(), link.edge_count());
        r.check_with(format!("link_{v}_size_36_72"), size == (36, 72), || json!(size));
        let relabelled = x.link_as_gamma(&link);
        let equal = relabelled.as_ref().is_ok_and(|l| *l == g);
        r.check_with(format!("link_{v}_equals_gamma"), equal, || match &relabelled {
            Err(e) => json!(e.to_string()),
            Ok(l) => {
                let a: BTreeSet<_> = l.edges().collect();
                let b: BTreeSet<_> = g.edges().collect();
                let show = |s: Vec<&Edge>| s.iter().map(|(u, v)| format!("{u} -- {v}")).collect::<Vec<_>>();
                json!({
                    "extra": show(a.difference(&b).collect()),
                    "missing": show(b.difference(&a).collect()),
                })
            }
        });
        links.insert(v.to_string(), json!({"vertices": size.0, "edges": size.1}));
    }
    let npc = x.verify_npc();
    let moussong = x.verify_moussong();
    r.check_with("npc", npc.passed, || json!(npc.violations))
        .check_with("moussong", moussong.passed, || json!(moussong.violations));
    r.derive("vertices", counts.0)
        .derive("edges", counts.1)
        .derive("squares", counts.2)
        .derive("euler_characteristic", x.euler_characteristic())
        .derive("links", links)
        .derive("npc_links_checked", npc.links_checked)
        .derive("moussong_links_checked", moussong.links_checked);
    Ok(Output::new("complex-verify", r))
}

fn validate_t(t: u32) -> Result<(), CliError> {
    RunConfig {
        t: Some(t),
        ..Default::default()
    }
    .validate()
}

pub fn cover_build(t: u32, out: Option<&Path>) -> Result<Output, CliError> {
    validate_t(t)?;
    let g = build_gamma();
    let mut r = CertReport::new("cover build", &json!({"t": t}));
    let z = build_truncation(&g, t).map_err(compute)?;
    let expected = expected_counts(t);
    r.check_with("counts_match_closed_forms", z.counts() == expected, || {
        json!({"found": z.counts(), "expected": expected})
    });
    let lg = level_graph(&z);
    r.check_with("level_graph_connected", lg.is_ok(), || json!(lg.as_ref().err().map(ToString::to_string)));
    let next = build_truncation(&g, t + 1).map_err(compute)?;
    r.check("nests_in_next_truncation", z.embeds_shifted(&next, 0))
        .check("deck_translates_nest", z.embeds_shifted(&next, 1) && z.embeds_shifted(&next, -1));
    let text = z.to_text();
    r.derive("t", t)
        .derive("levels", [-z.top_level(), z.top_level()])
        .derive("vertices", z.counts().0)
        .derive("edges", z.counts().1)
        .derive("squares", z.counts().2)
        .derive("closed_forms", json!({"vertices": "2(4t+1)", "edges": "144t", "squares": "36(4t-1)"}))
        .derive("truncation_sha256", sha256_hex(text.as_bytes()));
    if let Ok(lg) = &lg {
        r.derive(
            "level_graph",
            json!({
                "vertices": lg.vertices.len(),
                "edges": lg.edges.len(),
                "tree_edges": lg.tree.len(),
                "cycle_rank": lg.cycle_rank(),
                "sha256": sha256_hex(lg.to_text().as_bytes()),
            }),
        );
    }
    let mut o = Output::new(format!("cover-build-t{t}"), r);
    if let Some(path) = out {
        o.artifacts.push(Artifact {
            path: path.to_path_buf(),
            bytes: text.into_bytes(),
        });
    }
    Ok(o)
}

pub fn cover_links(t: u32) -> Result<Output, CliError> {
    validate_t(t)?;
    let g = build_gamma();
    let mut r = CertReport::new("cover links", &json!({"t": t}));
    let z = build_truncation(&g, t).map_err(compute)?;
    let mut checked = BTreeMap::<String, usize>::new();
    let mut bad = vec![];
    for &v in z.vertices() {
        for dir in [Direction::Asc, Direction::Desc] {
            if !z.contains_level(v.level + 2 * dir.delta()) {
                continue;
            }
            let ok = match asc_desc_link(&z, v, dir) {
                Ok(link) => link.cycle.len() == 18 && link.matches(&g),
                Err(_) => false,
            };
            if !ok {
                bad.push(format!("{v} {dir}"));
            }
            *checked.entry(dir.to_string()).or_default() += 1;
        }
    }
    r.check_with("all_links_are_matching_18_cycles", bad.is_empty(), || json!(bad));
    let mut signs = BTreeMap::new();
    for base in ComplexVertex::all() {
        for dir in [Direction::Asc, Direction::Desc] {
            let v = CoverVertex::new(base, (base.parity() as i64).rem_euclid(2)).map_err(compute)?;
            let (s, t) = v.link_signs(dir);
            signs.insert(format!("{base} {dir}"), sign_pair(s, t));
        }
    }
    r.derive("t", t).derive("links_checked", checked).derive("link_subgraphs", signs);
    Ok(Output::new(format!("cover-links-t{t}"), r))
}

/// Truncation data and the relators extracted from it with one seed.
pub type RelatorRun = Rc<(RelatorContext, Vec<RelatorRecord>)>;

/// Relator extraction results, shared between reports of one run.
#[derive(Default)]
pub struct RelatorCache {
    runs: HashMap<(u32, u64), RelatorRun>,
}

impl RelatorCache {
    pub fn get(&mut self, t: u32, seed: u64) -> Result<RelatorRun, CliError> {
        if let Some(run) = self.runs.get(&(t, seed)) {
            return Ok(run.clone());
        }
        let ctx = RelatorContext::new(&build_gamma(), t).map_err(compute)?;
        let records = ctx.all_relators(seed).map_err(compute)?;
        let run = Rc::new((ctx, records));
        self.runs.insert((t, seed), run.clone());
        Ok(run)
    }
}

/// Digest of a word's letters as little-endian `i32`s.
pub fn word_sha256(word: &FreeWord) -> String {
    let bytes: Vec<u8> = word.letters().iter().flat_map(|l| l.to_le_bytes()).collect();
    sha256_hex(&bytes)
}

pub fn relators(cache: &mut RelatorCache, t: u32, seed: u64, out: Option<&Path>) -> Result<Output, CliError> {
    validate_t(t)?;
    let mut r = CertReport::new("relators", &json!({"t": t, "tie_break_seed": seed}));
    let run = cache.get(t, seed)?;
    let (ctx, records) = (&run.0, &run.1);
    let full = H1Oracle::new(&ctx.z, None);
    let mut rows = vec![];
    let mut failures: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for rec in records {
        let v = rec.vertex.to_string();
        let (lo, hi) = rec.slab.level_range();
        let in_slab = rec.slab.is_closed() && rec.side.contains(lo) && rec.side.contains(hi);
        let bound_ok = rec.stats.check_bound().is_ok();
        let before = rec.initial.chain(&ctx.z).map_err(compute)?;
        let after = rec.slab.chain(&ctx.z).map_err(compute)?;
        let h1 = full.same_class(&before, &after);
        let h1_star = H1Oracle::new(&ctx.z, Some(rec.vertex)).same_class(&before, &after);
        let chain_ok = word_chain(&ctx.z, &ctx.lg, &rec.word, rec.side) == after;
        for (name, ok) in [
            ("closed_in_slab", in_slab),
            ("move_bound", bound_ok),
            ("h1_class_conserved", h1),
            ("h1_class_conserved_off_star", h1_star),
            ("word_abelianizes_to_slab_class", chain_ok),
            ("word_nonempty", !rec.word.is_empty()),
        ] {
            if !ok {
                failures.entry(name).or_default().push(v.clone());
            }
        }
        rows.push(json!({
            "vertex": v,
            "direction": rec.direction.to_string(),
            "slab": rec.side,
            "slab_levels": [lo, hi],
            "initial_length": rec.initial.len(),
            "slab_length": rec.slab.len(),
            "word_length": rec.word.len(),
            "word_sha256_le32": word_sha256(&rec.word),
            "moves": rec.stats.total_moves(),
            "moves_by_level": rec.stats.moves.iter().map(|(l, m)| (l.to_string(), *m)).collect::<BTreeMap<_, _>>(),
            "passes": rec.stats.passes,
            "squares_crossed": rec.stats.squares,
        }));
    }
    r.check_with("relator_count_8t", records.len() == 8 * t as usize, || json!(records.len()));
    for name in [
        "closed_in_slab",
        "move_bound",
        "h1_class_conserved",
        "h1_class_conserved_off_star",
        "word_abelianizes_to_slab_class",
        "word_nonempty",
    ] {
        let bad = failures.remove(name).unwrap_or_default();
        r.check_with(name, bad.is_empty(), || json!(bad));
    }
    r.derive("t", t)
        .derive("tie_break_seed", seed)
        .derive("generator_count", ctx.lg.generator_count())
        .derive("relators", rows);
    let name = if seed == 0 { format!("relators-t{t}") } else { format!("relators-t{t}-seed{seed}") };
    let mut o = Output::new(name, r);
    if let Some(path) = out {
        let words: Vec<Value> = records
            .iter()
            .map(|rec| json!({"vertex": rec.vertex.to_string(), "slab": rec.side, "word": rec.word.letters()}))
            .collect();
        let bytes = crate::report::canonical_compact(&json!({"t": t, "tie_break_seed": seed, "relators": words}));
        o.artifacts.push(Artifact {
            path: path.to_path_buf(),
            bytes: bytes.into_bytes(),
        });
    }
    Ok(o)
}

/// Builds the presentation file for `(t, p, W)`.
pub fn presentation_file(cache: &mut RelatorCache, cfg: &RunConfig) -> Result<PresentationFile, CliError> {
    cfg.validate()?;
    let t = cfg.t.ok_or_else(|| CliError::usage("--t", "required"))?;
    let p = cfg.p.ok_or_else(|| CliError::usage("--p", "required"))?;
    let w = cfg.w.clone().unwrap_or_default();
    let run = cache.get(t, cfg.tie_break_seed)?;
    let bp = presentation(&run.0, &run.1, p, &w, cfg.tie_break_seed).map_err(compute)?;
    Ok(PresentationFile::from_branched(&bp))
}

pub fn present(cache: &mut RelatorCache, cfg: &RunConfig, out: Option<&Path>) -> Result<Output, CliError> {
    let file = presentation_file(cache, cfg)?;
    let bytes = file.to_bytes();
    let (t, p, w) = (file.metadata.t, file.metadata.p, file.metadata.w.clone());
    let mut r = CertReport::new(
        "present",
        &json!({"t": t, "p": p, "W": w, "tie_break_seed": cfg.tie_break_seed}),
    );
    let pres = file.presentation();
    let flagged = pres.flagged_levels();
    r.check_with("relator_count_8t", pres.relators.len() == 8 * t as usize, || json!(pres.relators.len()))
        .check_with("flagged_count_is_W_size", flagged.len() == w.len(), || json!(flagged.len()))
        .check_with("flagged_levels_equal_W", flagged == w, || json!(flagged));
    r.derive("t", t)
        .derive("p", p)
        .derive("W", &w)
        .derive("generator_count", pres.generator_count)
        .derive("relator_count", pres.relators.len())
        .derive("flagged_levels", &flagged)
        .derive("word_lengths", file.relators.iter().map(Vec::len).collect::<Vec<_>>())
        .derive("labels", &file.labels)
        .derive("presentation_sha256", sha256_hex(&bytes));
    let mut o = Output::new(format!("present-t{t}-p{p}-w{}", w_slug(&w)), r);
    if let Some(path) = out {
        o.artifacts.push(Artifact {
            path: path.to_path_buf(),
            bytes,
        });
    }
    Ok(o)
}

pub fn load_presentation(path: &Path) -> Result<(PresentationFile, String), CliError> {
    let bytes = read_input(path)?;
    let file = PresentationFile::parse(&bytes).map_err(|message| CliError::Input {
        path: path.display().to_string(),
        message,
    })?;
    Ok((file, sha256_hex(&bytes)))
}

fn invariant_summary(ab: &Abelianization) -> Value {
    json!({
        "invariants": strings(&ab.snf.invariants),
        "torsion": strings(ab.snf.torsion()),
        "rank": ab.snf.rank(),
        "free_rank": ab.free_rank,
    })
}

pub fn abelianize_file(file: &PresentationFile, digest: &str) -> Output {
    let mut r = CertReport::new("abelianize", &json!({"presentation_sha256": digest}));
    let pres = file.presentation();
    let ab = abelianization(&pres);
    r.check("divisibility_chain", ab.snf.is_chain())
        .check("rank_plus_free_rank_is_generator_count", ab.snf.rank() + ab.free_rank == pres.generator_count);
    r.derive("generator_count", pres.generator_count)
        .derive("relator_count", pres.relators.len())
        .derive("metadata", &file.metadata)
        .derive("abelianization", invariant_summary(&ab));
    Output::new("abelianize", r)
}

pub fn abelianize(path: &Path) -> Result<Output, CliError> {
    let (file, digest) = load_presentation(path)?;
    Ok(abelianize_file(&file, &digest))
}

/// Abelianizations for `t ≤ 4`, `p ∈ {2, 3}`, `W ∈ {∅, {1}, {1, 2}}`.
pub fn abelianization_table(cache: &mut RelatorCache) -> Result<Output, CliError> {
    let ts = [1u32, 2, 3, 4];
    let ps = [2u32, 3];
    let ws: [&[u32]; 3] = [&[], &[1], &[1, 2]];
    let mut r = CertReport::new("abelianize table", &json!({"t": ts, "p": ps, "W": ws, "tie_break_seed": 0}));
    let mut rows = vec![];
    let mut chains = true;
    for t in ts {
        for p in ps {
            for w in ws {
                let cfg = RunConfig {
                    t: Some(t),
                    p: Some(p),
                    w: Some(w.to_vec()),
                    ..Default::default()
                };
                let mut row = json!({"t": t, "p": p, "W": w});
                match presentation_file(cache, &cfg) {
                    Ok(file) => {
                        let pres = file.presentation();
                        let ab = abelianization(&pres);
                        chains &= ab.snf.is_chain();
                        row["relator_count"] = json!(pres.relators.len());
                        row["flagged"] = json!(pres.flagged_levels().len());
                        row["abelianization"] = invariant_summary(&ab);
                    }
                    Err(CliError::Usage { message, .. }) => row["skipped"] = json!(message),
                    Err(e) => return Err(e),
                }
                rows.push(row);
            }
        }
    }
    // Whether adding level 1 to W changes the invariants, per (t, p).
    let mut differs = BTreeMap::new();
    for t in ts {
        for p in ps {
            let find = |w: &[u32]| {
                rows.iter()
                    .find(|row| row["t"] == json!(t) && row["p"] == json!(p) && row["W"] == json!(w))
                    .and_then(|row| row.get("abelianization").cloned())
            };
            differs.insert(format!("t{t}_p{p}"), find(&[]) != find(&[1]));
        }
    }
    r.check("divisibility_chains", chains);
    r.derive("table", rows).derive("empty_vs_level_1_differs", differs);
    Ok(Output::new("abelianization-table", r))
}

fn load_hom(path: &Path) -> Result<Hom, CliError> {
    let bytes = read_input(path)?;
    let input = |message: String| CliError::Input {
        path: path.display().to_string(),
        message,
    };
    let file: HomFile = serde_json::from_slice(&bytes).map_err(|e| input(e.to_string()))?;
    Hom::from_file(&file).map_err(|e| input(e.to_string()))
}

fn profile_json(p: &OrderProfile) -> Value {
    json!({
        "orders": p.orders,
        "satisfied": p.satisfied,
        "branch_orders": p.branch_orders,
        "O": p.o_set,
    })
}

pub fn quotient_eval(pres_path: &Path, hom_path: &Path) -> Result<Output, CliError> {
    let (file, digest) = load_presentation(pres_path)?;
    let hom = load_hom(hom_path)?;
    let hom_json = serde_json::to_value(hom.to_file()).expect("hom serializes");
    let mut r = CertReport::new("quotient eval", &json!({"presentation_sha256": digest, "hom": hom_json}));
    let pres = file.presentation();
    if hom.images().len() != pres.generator_count {
        return Err(CliError::Input {
            path: hom_path.display().to_string(),
            message: format!("{} images for {} generators", hom.images().len(), pres.generator_count),
        });
    }
    let profile = order_profile(&pres, &hom).map_err(compute)?;
    let w: BTreeSet<u32> = pres.flagged_levels().into_iter().collect();
    let unsatisfied: Vec<usize> = (0..profile.satisfied.len()).filter(|&i| !profile.satisfied[i]).collect();
    r.check_with("relators_satisfied", unsatisfied.is_empty(), || json!(unsatisfied))
        .check_with("O_equals_W", profile.o_set == w, || json!({"O": profile.o_set, "W": w}));
    r.derive("degree", hom.degree()).derive("profile", profile_json(&profile));
    Ok(Output::new("quotient-eval", r))
}

pub fn quotient_search_file(file: &PresentationFile, digest: &str, n: usize, budget: u64) -> Result<(Output, Option<Hom>), CliError> {
    RunConfig {
        n: Some(n),
        budget: Some(budget),
        ..Default::default()
    }
    .validate()?;
    let mut r = CertReport::new("quotient search", &json!({"presentation_sha256": digest, "n": n, "budget": budget}));
    let pres = file.presentation();
    let outcome = vtf_witness_search(&pres, n, budget);
    r.derive("n", n)
        .derive("budget", budget)
        .derive("outcome", outcome.kind())
        .derive("nodes", outcome.nodes())
        .derive("W", pres.flagged_levels());
    let mut witness = None;
    if let SearchOutcome::Witness { hom, .. } = &outcome {
        let profile = order_profile(&pres, hom).map_err(compute)?;
        let w: BTreeSet<u32> = pres.flagged_levels().into_iter().collect();
        r.check_with("witness_revalidates", profile.all_satisfied() && profile.o_set == w, || profile_json(&profile));
        r.derive("witness", hom.to_file().generators).derive("profile", profile_json(&profile));
        witness = Some(hom.clone());
    }
    Ok((Output::new(format!("quotient-search-n{n}"), r), witness))
}

pub fn quotient_search(pres_path: &Path, n: usize, budget: u64, out: Option<&Path>) -> Result<Output, CliError> {
    let (file, digest) = load_presentation(pres_path)?;
    let (mut o, witness) = quotient_search_file(&file, &digest, n, budget)?;
    if let (Some(path), Some(hom)) = (out, witness) {
        let v = serde_json::to_value(hom.to_file()).expect("hom serializes");
        o.artifacts.push(Artifact {
            path: path.to_path_buf(),
            bytes: crate::report::canonical_pretty(&v).into_bytes(),
        });
    }
    Ok(o)
}

/// One-sided nontriviality evidence for branch relators, over degrees `1..=n`.
pub fn quotient_certify_file(file: &PresentationFile, digest: &str, levels: &[u32], n: usize, budget: u64) -> Result<Output, CliError> {
    RunConfig {
        n: Some(n),
        budget: Some(budget),
        ..Default::default()
    }
    .validate()?;
    let mut r = CertReport::new(
        "quotient certify",
        &json!({"presentation_sha256": digest, "levels": levels, "n": n, "budget": budget}),
    );
    let pres = file.presentation();
    let mut rows = vec![];
    let mut sound = true;
    for degree in 1..=n {
        for (level, cert) in nontriviality_certificate(&pres, levels, degree, budget) {
            let row = match cert {
                Certificate::Found { hom, nodes } => {
                    let profile = order_profile(&pres, &hom).map_err(compute)?;
                    sound &= profile.all_satisfied() && profile.o_set.contains(&level);
                    json!({"level": level, "n": degree, "result": "certificate", "nodes": nodes, "hom": hom.to_file().generators})
                }
                Certificate::Unknown { reason, nodes } => {
                    json!({"level": level, "n": degree, "result": "unknown", "reason": reason, "nodes": nodes})
                }
            };
            rows.push(row);
        }
    }
    r.check("certificates_revalidate", sound);
    r.derive("certificates", rows);
    Ok(Output::new(format!("quotient-certify-n{n}"), r))
}

pub fn quotient_certify(pres_path: &Path, levels: &[u32], n: usize, budget: u64) -> Result<Output, CliError> {
    let (file, digest) = load_presentation(pres_path)?;
    quotient_certify_file(&file, &digest, levels, n, budget)
}
