//! Rendering of descent reports: a schema-stable JSON document and a
//! human-readable text form that cites the rule fired at each step.
//!
//! Reports never upgrade declared inputs to proven facts; the declared
//! items (ranks, Sha orders, L-value flags) appear under `assumptions`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::descent::{DescentReport, Parity, Verdict};
use crate::local_norm::DGroup;
use crate::zpg_catalog::{GroupSpec, Multiset};

/// Bumped whenever a field is added, removed, or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

/// Run context recorded alongside the mathematical content so that JSON
/// output is reproducible byte for byte.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ReportMeta {
    pub curve_label: String,
    pub field_label: String,
    pub precision: u32,
    /// named RNG seeds (e.g. the regulator pairing seed), when any were used
    pub seeds: BTreeMap<String, u64>,
}

/// "Zp + A^2" style rendering via the catalog's display names; the zero
/// module is "0".
pub fn multiset_symbol(group: &GroupSpec, ms: &Multiset) -> String {
    if ms.is_empty() {
        return "0".into();
    }
    ms.iter()
        .map(|(ind, mult)| {
            let s = ind.display_name(group);
            if *mult == 1 {
                s
            } else {
                format!("{s}^{mult}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn group_symbol(group: &GroupSpec) -> String {
    match group {
        GroupSpec::Cyclic { p } => format!("C_{p}"),
        GroupSpec::Metacyclic { p, m: 2, .. } => format!("D_{p}"),
        GroupSpec::Metacyclic { p, m, .. } => format!("C_{p} : C_{m}"),
    }
}

fn dgroup_text(g: &DGroup) -> String {
    match g {
        DGroup::Known(exps) if exps.is_empty() => "trivial".into(),
        DGroup::Known(exps) => exps
            .iter()
            .map(|e| format!("Z/p^{e}"))
            .collect::<Vec<_>>()
            .join(" x "),
        DGroup::NonTrivialAtLeast(e) => format!("nontrivial, order at least p^{e}"),
        DGroup::Indeterminate(reason) => format!("indeterminate ({reason})"),
    }
}

#[derive(Serialize)]
struct JsonDecomposition {
    summands: Multiset,
    display: String,
    rank: usize,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum JsonVerdict {
    Exact {
        decomposition: JsonDecomposition,
    },
    Candidates {
        candidates: Vec<JsonDecomposition>,
        missing_data: String,
    },
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema_version: u32,
    meta: &'a ReportMeta,
    p: u64,
    group: String,
    places: &'a [crate::descent::DvEntry],
    coker_total: crate::descent::CokerBounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    coker_plus: Option<crate::descent::CokerBounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coker_minus: Option<crate::descent::CokerBounds>,
    h1_bounds: &'a [crate::descent::CharBound],
    verdict: JsonVerdict,
    rank_lo: usize,
    rank_hi: usize,
    sha_lower_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sha_trivial: Option<bool>,
    sha_notes: &'a [String],
    regulator_parity: Parity,
    assumptions: &'a [String],
}

fn decomposition(report: &DescentReport, ms: &Multiset) -> JsonDecomposition {
    JsonDecomposition {
        summands: ms.clone(),
        display: multiset_symbol(&report.group, ms),
        rank: crate::descent::multiset_rank(report.p as usize, ms),
    }
}

pub fn render_json(report: &DescentReport, meta: &ReportMeta) -> String {
    let verdict = match &report.verdict {
        Verdict::Exact(ms) => JsonVerdict::Exact { decomposition: decomposition(report, ms) },
        Verdict::Candidates { list, missing_data } => JsonVerdict::Candidates {
            candidates: list.iter().map(|ms| decomposition(report, ms)).collect(),
            missing_data: missing_data.clone(),
        },
    };
    let doc = JsonReport {
        schema_version: SCHEMA_VERSION,
        meta,
        p: report.p,
        group: group_symbol(&report.group),
        places: &report.d_assembly.entries,
        coker_total: report.coker_total,
        coker_plus: report.coker_plus,
        coker_minus: report.coker_minus,
        h1_bounds: &report.h1_bounds,
        verdict,
        rank_lo: report.rank_k.0,
        rank_hi: report.rank_k.1,
        sha_lower_bound: report.sha_lower_bound,
        sha_trivial: report.sha_trivial,
        sha_notes: &report.sha_notes,
        regulator_parity: report.regulator_parity,
        assumptions: &report.assumptions,
    };
    serde_json::to_string_pretty(&doc).expect("reports serialize")
}

fn bounds_text(b: crate::descent::CokerBounds) -> String {
    if b.is_exact() {
        format!("{}", b.lo)
    } else {
        format!("[{}, {}]", b.lo, b.hi)
    }
}

pub fn render_text(report: &DescentReport, meta: &ReportMeta) -> String {
    let mut out = String::new();
    let g = group_symbol(&report.group);
    push(&mut out, format!("analysis of {} over the {g} field {} (p = {})",
        meta.curve_label, meta.field_label, report.p));
    push(&mut out, "".into());
    push(&mut out, "local contributions D_v:".into());
    if report.d_assembly.entries.is_empty() {
        push(&mut out, "  (none: every relevant place contributes trivially)".into());
    }
    for e in &report.d_assembly.entries {
        let chi = match e.character {
            Some(crate::descent::Character::Untwisted) => ", untwisted eigenspace",
            Some(crate::descent::Character::Twisted) => ", twisted eigenspace",
            None => "",
        };
        let places = if e.places == 2 { ", two places" } else { "" };
        push(&mut out, format!(
            "  ell = {}: {} (dim D/p in [{}, {}]{chi}{places}) -- rule: {}",
            e.ell, dgroup_text(&e.group), e.dim_lo, e.dim_hi, e.provenance));
    }
    push(&mut out, "".into());
    push(&mut out, format!(
        "coker(E(Q) x Z_p -> D): {} -- rule: generator images in D/p, rank over F_p",
        bounds_text(report.coker_total)));
    if let Some(b) = report.coker_plus {
        push(&mut out, format!("  untwisted part: {}", bounds_text(b)));
    }
    if let Some(b) = report.coker_minus {
        push(&mut out, format!("  twisted part: {}", bounds_text(b)));
    }
    for h in &report.h1_bounds {
        push(&mut out, format!(
            "dim H^1 bound, {} summand count: [{}, {}] -- rule: cokernel plus declared Sha",
            h.character, h.lo, h.hi));
    }
    push(&mut out, "".into());
    match &report.verdict {
        Verdict::Exact(ms) => {
            push(&mut out, format!(
                "M = {} -- rule: unique solution of the rank/cohomology constraints",
                multiset_symbol(&report.group, ms)));
        }
        Verdict::Candidates { list, missing_data } => {
            push(&mut out, "candidate decompositions (constraints do not single one out):".into());
            for ms in list {
                push(&mut out, format!("  M = {}", multiset_symbol(&report.group, ms)));
            }
            push(&mut out, format!("missing data: {missing_data}"));
        }
    }
    push(&mut out, format!("rank E(K): {}", if report.rank_k.0 == report.rank_k.1 {
        format!("{}", report.rank_k.0)
    } else {
        format!("[{}, {}]", report.rank_k.0, report.rank_k.1)
    }));
    push(&mut out, format!(
        "dim Sha(E/K)[p] >= {} -- rule: local-norm count against the rank",
        report.sha_lower_bound));
    match report.sha_trivial {
        Some(true) => push(&mut out, "Sha(E/K)[p] = 0".into()),
        Some(false) => push(&mut out, "Sha(E/K)[p] != 0".into()),
        None => {}
    }
    for n in &report.sha_notes {
        push(&mut out, format!("note: {n}"));
    }
    match report.regulator_parity {
        Parity::Even => push(&mut out, "s(M) even -- rule: regulator-constant parity".into()),
        Parity::Odd => push(&mut out, "s(M) odd -- rule: regulator-constant parity".into()),
        Parity::Unknown => {}
    }
    if !report.assumptions.is_empty() {
        push(&mut out, "".into());
        push(&mut out, "declared inputs (not verified here):".into());
        for a in &report.assumptions {
            push(&mut out, format!("  - {a}"));
        }
    }
    out
}

fn push(out: &mut String, line: String) {
    out.push_str(&line);
    out.push('\n');
}

pub fn render_report(report: &DescentReport, meta: &ReportMeta, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => render_json(report, meta),
        ReportFormat::Text => render_text(report, meta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::{Character, CokerBounds, DvAssembly, DvEntry};
    use crate::zpg_catalog::Indecomposable;

    fn base_report(verdict: Verdict) -> DescentReport {
        DescentReport {
            p: 3,
            group: GroupSpec::dihedral(3),
            d_assembly: DvAssembly {
                p: 3,
                entries: vec![
                    DvEntry {
                        ell: 2,
                        group: DGroup::cyclic(1),
                        dim_lo: 1,
                        dim_hi: 1,
                        character: Some(Character::Twisted),
                        places: 1,
                        provenance: "ramified split multiplicative place of F".into(),
                    },
                    DvEntry {
                        ell: 3,
                        group: DGroup::Indeterminate("wildly ramified place above p in K/F".into()),
                        dim_lo: 0,
                        dim_hi: 2,
                        character: None,
                        places: 1,
                        provenance: "ramified place above p".into(),
                    },
                ],
            },
            coker_total: CokerBounds::exact(1),
            coker_plus: Some(CokerBounds::exact(0)),
            coker_minus: Some(CokerBounds::exact(1)),
            h1_bounds: vec![],
            verdict,
            rank_k: (0, 0),
            sha_lower_bound: 0,
            sha_trivial: None,
            sha_notes: vec![],
            regulator_parity: Parity::Unknown,
            assumptions: vec!["rank E(Q) = 0 as declared".into()],
        }
    }

    fn meta() -> ReportMeta {
        ReportMeta {
            curve_label: "14a3".into(),
            field_label: "x^3+2x-2 / Q(sqrt(-35))".into(),
            precision: 20,
            seeds: BTreeMap::new(),
        }
    }

    #[test]
    fn exact_verdict_renders_one_decomposition_line() {
        let rep = base_report(Verdict::Exact(vec![(Indecomposable::Chi { j: 1 }, 1)]));
        let text = render_text(&rep, &meta());
        assert!(text.contains("M = Zp~"), "{text}");
        assert_eq!(text.lines().filter(|l| l.starts_with("M = ")).count(), 1);
        assert!(text.contains("rule: ramified split multiplicative place of F"));
    }

    #[test]
    fn candidates_verdict_lists_all_and_names_missing_data() {
        let rep = base_report(Verdict::Candidates {
            list: vec![
                vec![(Indecomposable::Chi { j: 1 }, 1)],
                vec![(Indecomposable::AChi { j: 1 }, 1), (Indecomposable::BChi { j: 1 }, 1)],
            ],
            missing_data: "the analytic vanishing of L(E, rho, 1) or the rank over L".into(),
        });
        let text = render_text(&rep, &meta());
        assert!(text.contains("M = Zp~"));
        assert!(text.contains("M = A~ + B~"));
        assert!(text.contains("missing data: the analytic vanishing"));
    }

    #[test]
    fn indeterminate_reason_is_embedded() {
        let rep = base_report(Verdict::Exact(vec![]));
        let text = render_text(&rep, &meta());
        assert!(text.contains("indeterminate (wildly ramified place above p in K/F)"));
        let json = render_json(&rep, &meta());
        assert!(json.contains("wildly ramified place above p in K/F"));
    }

    #[test]
    fn json_is_byte_stable_and_versioned() {
        let rep = base_report(Verdict::Exact(vec![(Indecomposable::Zp, 2)]));
        let m = meta();
        let a = render_json(&rep, &m);
        let b = render_json(&rep, &m);
        assert_eq!(a, b);
        assert!(a.contains("\"schema_version\": 1"));
        let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed["verdict"]["decomposition"]["display"], "Zp^2");
        assert_eq!(parsed["verdict"]["decomposition"]["rank"], 2);
    }

    #[test]
    fn symbols_follow_the_catalog_names() {
        let cyc = GroupSpec::Cyclic { p: 5 };
        let dih = GroupSpec::dihedral(5);
        assert_eq!(
            multiset_symbol(&cyc, &vec![(Indecomposable::Zp, 1), (Indecomposable::CycloA, 2)]),
            "Zp + A^2"
        );
        assert_eq!(
            multiset_symbol(&dih, &vec![(Indecomposable::BChi { j: 1 }, 1)]),
            "B~"
        );
        assert_eq!(multiset_symbol(&cyc, &vec![]), "0");
    }
}
