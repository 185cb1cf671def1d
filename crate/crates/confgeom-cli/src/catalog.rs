//! `catalog`: surfaces, conformal factors and invariants known to the tool.

use serde::Serialize;

use crate::compute::{known_invariants, Scope};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub kind: &'static str,
    pub name: String,
    pub detail: String,
}

fn anchor(name: &str) -> &'static str {
    match name {
        "normII2" => "squared norm of the traceless second fundamental form",
        "willmore" => "Willmore operator; the surface is Willmore where it vanishes",
        "norm_grad" => "squared norm of the co-derivative of the lifted second fundamental form",
        "dlap_willmore" => "double ambient Laplacian of the associate-surface mean curvature, surface form",
        "htilde" => "mean curvature of the associate 4-surface",
        "norm_h" => "squared norm of its second fundamental form",
        "trace_h2" | "trace_h3" | "trace_h4" => "trace of a power of its shape operator",
        "lap_htilde" => "ambient Laplacian of its mean curvature",
        "norm_grad_h" => "squared norm of the co-derivative of its second fundamental form",
        "dlap_htilde" => "ambient double Laplacian of its mean curvature",
        _ => "",
    }
}

/// Sorted listing.
pub fn entries() -> Vec<Entry> {
    let mut out = vec![
        Entry {
            kind: "surface",
            name: "clifford".into(),
            detail: "(cos u, sin u, cos v, sin v)/sqrt 2, params []".into(),
        },
        Entry {
            kind: "surface",
            name: "flat_torus".into(),
            detail: "(r cos(u/r), r sin(u/r), s cos(v/s), s sin(v/s)), s = sqrt(1 - r^2), params [r], 0 < r < 1".into(),
        },
        Entry {
            kind: "surface",
            name: "mobius_image".into(),
            detail: "any surface with \"transform\": \"boost:d1,d2,d3,d4,rapidity\" or \"rotation:i,j,angle\"".into(),
        },
        Entry { kind: "lambda", name: "affine".into(), detail: "a + b.x, params [a, b1, b2, b3, b4], a > |b|".into() },
        Entry { kind: "lambda", name: "constant".into(), detail: "c, params [c], c > 0".into() },
        Entry { kind: "lambda", name: "round".into(), detail: "1, params []".into() },
    ];
    for i in known_invariants() {
        let scope = match i.scope {
            Scope::Surface => "surface",
            Scope::Ambient => "ambient",
        };
        out.push(Entry {
            kind: "invariant",
            name: i.name.into(),
            detail: format!("order {} ({scope}; {})", i.order, anchor(i.name)),
        });
    }
    out.sort_by(|a, b| (a.kind, &a.name).cmp(&(b.kind, &b.name)));
    out
}

/// Plain-text form, one entry per line, e.g. `invariant willmore: order 3 (...)`.
pub fn text() -> String {
    let mut s = String::new();
    for e in entries() {
        s.push_str(&format!("{} {}: {}\n", e.kind, e.name, e.detail));
    }
    s
}
