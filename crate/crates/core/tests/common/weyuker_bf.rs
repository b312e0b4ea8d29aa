//! Exhaustive search over a small class space, independent of the library's
//! combination and metric code.
//!
//! A tiny class is four method slots `m0..m3`; each slot is absent or holds
//! the bitmask of fields `f0..f2` the method uses.

use entropia::model::{build_model, ClassDef, ClassModel, FieldDef, MethodDef};
use entropia::weyuker::{combined_value, Metric};
use entropia::WmcWeighting;

pub const SLOTS: usize = 4;
pub const FIELDS: usize = 3;

pub type Tiny = [Option<u8>; SLOTS];

/// All 9^4 tiny classes, in a fixed order.
pub fn space() -> Vec<Tiny> {
    let options: Vec<Option<u8>> = std::iter::once(None)
        .chain((0..1u8 << FIELDS).map(Some))
        .collect();
    let mut out = Vec::new();
    for a in &options {
        for b in &options {
            for c in &options {
                for d in &options {
                    out.push([*a, *b, *c, *d]);
                }
            }
        }
    }
    out
}

pub fn lcom(t: &Tiny) -> usize {
    let present: Vec<u8> = t.iter().flatten().copied().collect();
    let mut comp: Vec<usize> = (0..present.len()).collect();
    // Repeated relabelling until stable: slow and obviously correct.
    loop {
        let mut changed = false;
        for i in 0..present.len() {
            for j in 0..present.len() {
                if present[i] & present[j] != 0 && comp[i] != comp[j] {
                    let low = comp[i].min(comp[j]);
                    comp[i] = low;
                    comp[j] = low;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut labels = comp;
    labels.sort_unstable();
    labels.dedup();
    labels.len()
}

/// Slot-wise union; colliding methods use the union of their fields.
pub fn combine(p: &Tiny, q: &Tiny) -> Tiny {
    let mut out = [None; SLOTS];
    for i in 0..SLOTS {
        out[i] = match (p[i], q[i]) {
            (Some(a), Some(b)) => Some(a | b),
            (a, b) => a.or(b),
        };
    }
    out
}

pub fn to_class(name: &str, t: &Tiny) -> ClassDef {
    let mut c = ClassDef::new(name);
    for f in 0..FIELDS {
        c = c.with_field(FieldDef::new(format!("f{f}"), "int"));
    }
    for (i, slot) in t.iter().enumerate() {
        if let Some(mask) = slot {
            let uses: Vec<String> = (0..FIELDS)
                .filter(|f| mask & (1 << f) != 0)
                .map(|f| format!("f{f}"))
                .collect();
            c = c.with_method(MethodDef::new(format!("m{i}"), 0).with_field_uses(uses));
        }
    }
    c
}

fn pair_model(p: &Tiny, q: &Tiny) -> ClassModel {
    build_model(
        vec![to_class("P", p), to_class("Q", q)],
        Vec::<String>::new(),
        None,
    )
    .unwrap()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcomFinding {
    pub p: Tiny,
    pub q: Tiny,
    pub values: (usize, usize, usize),
    /// Pairs examined before the first counterexample.
    pub examined: usize,
}

/// First pair in enumeration order with lcom(P+Q) < max(lcom P, lcom Q).
pub fn lcom_property4_counterexample() -> Option<LcomFinding> {
    let space = space();
    let mut examined = 0;
    for p in &space {
        for q in &space {
            examined += 1;
            let (lp, lq, lpq) = (lcom(p), lcom(q), lcom(&combine(p, q)));
            if lpq < lp.max(lq) {
                return Some(LcomFinding {
                    p: *p,
                    q: *q,
                    values: (lp, lq, lpq),
                    examined,
                });
            }
        }
    }
    None
}

/// The library agrees with the brute force on a given pair.
pub fn library_lcom_agrees(f: &LcomFinding) -> bool {
    let model = pair_model(&f.p, &f.q);
    let lib = combined_value(Metric::Lcom, &model, "P", "Q");
    lib == f.values.2 as f64
        && Metric::Lcom.of(&model, "P") == f.values.0 as f64
        && Metric::Lcom.of(&model, "Q") == f.values.1 as f64
}

/// Unit WMC over every pair of method-name subsets: (property 4 holds on
/// all pairs, some pair witnesses property 6, library agrees on all pairs).
pub fn unit_wmc_exhaustive() -> (bool, bool, bool) {
    let mut p4_holds = true;
    let mut p6_witness = false;
    let mut library_agrees = true;
    let metric = Metric::Wmc(WmcWeighting::Unit);
    for a in 0u8..16 {
        for b in 0u8..16 {
            let to_tiny = |m: u8| -> Tiny {
                let mut t = [None; SLOTS];
                for (i, slot) in t.iter_mut().enumerate() {
                    if m & (1 << i) != 0 {
                        *slot = Some(0);
                    }
                }
                t
            };
            let (wp, wq, wpq) = (a.count_ones(), b.count_ones(), (a | b).count_ones());
            p4_holds &= wpq >= wp.max(wq);
            p6_witness |= wp + wq < wpq;
            let model = pair_model(&to_tiny(a), &to_tiny(b));
            library_agrees &= combined_value(metric, &model, "P", "Q") == wpq as f64;
        }
    }
    (p4_holds, p6_witness, library_agrees)
}

/// NOC for P with `k` children and Q with `j` children, k, j in 0..=3: the
/// combination is a new class nobody extends, so its NOC is 0. Returns the
/// (k, j) configurations that violate property 4, and whether the library's
/// combined values agree everywhere.
pub fn noc_property4_violations() -> (Vec<(usize, usize)>, bool) {
    let mut violations = Vec::new();
    let mut agrees = true;
    for k in 0..=3 {
        for j in 0..=3 {
            let mut classes = vec![ClassDef::new("P"), ClassDef::new("Q")];
            classes.extend((0..k).map(|i| ClassDef::new(format!("P{i}")).extends("P")));
            classes.extend((0..j).map(|i| ClassDef::new(format!("Q{i}")).extends("Q")));
            let model = build_model(classes, Vec::<String>::new(), None).unwrap();
            let combined = 0usize;
            if combined < k.max(j) {
                violations.push((k, j));
            }
            agrees &= combined_value(Metric::Noc, &model, "P", "Q") == combined as f64
                && Metric::Noc.of(&model, "P") == k as f64
                && Metric::Noc.of(&model, "Q") == j as f64;
        }
    }
    (violations, agrees)
}
