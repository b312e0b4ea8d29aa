//! Hand-enumerated CK values and line counts for the fixture corpus, and a
//! brute-force recomputation written against the raw model data only.

use std::collections::{BTreeSet, VecDeque};

use entropia::metrics::{MetricVector, WmcWeighting};
use entropia::model::{ClassDef, ClassModel, Receiver};

/// class, wmc unit, wmc cyclomatic, dit, noc, cbo, rfc, lcom components, lcom %.
pub type HandRow = (
    &'static str,
    usize,
    usize,
    usize,
    usize,
    usize,
    usize,
    usize,
    f64,
);

pub const HAND: &[HandRow] = &[
    ("Account", 3, 5, 0, 1, 1, 4, 2, 400.0 / 9.0),
    ("Bank", 2, 2, 0, 0, 2, 4, 2, 75.0),
    ("Cache", 3, 4, 0, 0, 1, 6, 1, 100.0 / 3.0),
    ("Canvas", 3, 3, 0, 1, 3, 8, 1, 100.0 / 3.0),
    ("Circle", 2, 3, 2, 0, 0, 4, 1, 0.0),
    ("Ledger", 2, 2, 0, 0, 0, 2, 1, 0.0),
    ("Marker", 0, 0, 0, 0, 0, 0, 0, 0.0),
    ("Report", 1, 2, 1, 0, 1, 12, 1, 0.0),
    ("Savings", 2, 3, 1, 0, 1, 6, 2, 50.0),
    ("Scanner", 3, 6, 0, 0, 0, 3, 3, 200.0 / 3.0),
    ("Shape", 3, 3, 1, 3, 0, 3, 3, 250.0 / 3.0),
    ("ShapeList", 3, 3, 0, 0, 1, 3, 1, 50.0),
    ("Square", 1, 1, 2, 0, 0, 3, 1, 0.0),
    ("Triangle", 3, 3, 2, 0, 0, 4, 2, 50.0),
];

pub const PERCENT_TOLERANCE: f64 = 1e-9;

pub fn hand_vector(row: &HandRow, w: WmcWeighting) -> MetricVector {
    MetricVector {
        wmc: match w {
            WmcWeighting::Unit => row.1,
            WmcWeighting::Cyclomatic => row.2,
        },
        dit: row.3,
        noc: row.4,
        cbo: row.5,
        rfc: row.6,
        lcom_components: row.7,
        lcom_percent: row.8,
    }
}

/// Describes the first disagreement, if any.
pub fn difference(class: &str, got: &MetricVector, want: &MetricVector) -> Option<String> {
    let g = (
        got.wmc,
        got.dit,
        got.noc,
        got.cbo,
        got.rfc,
        got.lcom_components,
    );
    let w = (
        want.wmc,
        want.dit,
        want.noc,
        want.cbo,
        want.rfc,
        want.lcom_components,
    );
    if g != w {
        return Some(format!(
            "{class}: (wmc, dit, noc, cbo, rfc, lcom) {g:?} vs {w:?}"
        ));
    }
    if (got.lcom_percent - want.lcom_percent).abs() > PERCENT_TOLERANCE {
        return Some(format!(
            "{class}: lcom% {} vs {}",
            got.lcom_percent, want.lcom_percent
        ));
    }
    None
}

pub fn assert_same(class: &str, got: &MetricVector, want: &MetricVector) {
    if let Some(d) = difference(class, got, want) {
        panic!("{d}");
    }
}

pub fn chain<'a>(model: &'a ClassModel, class: &'a ClassDef) -> Vec<&'a ClassDef> {
    let mut out = vec![class];
    let mut cur = class;
    while let Some(p) = cur.parent.as_deref().and_then(|p| model.get(p)) {
        out.push(p);
        cur = p;
    }
    out
}

pub fn bf_dit(model: &ClassModel, class: &ClassDef) -> usize {
    let c = chain(model, class);
    let top = c.last().unwrap();
    c.len() - 1 + usize::from(top.parent.is_some())
}

pub fn bf_noc(model: &ClassModel, class: &ClassDef) -> usize {
    model
        .classes()
        .iter()
        .filter(|c| c.parent.as_deref() == Some(class.name.as_str()))
        .count()
}

pub fn bf_related(model: &ClassModel, class: &ClassDef) -> BTreeSet<String> {
    let mut related: BTreeSet<String> = BTreeSet::new();
    let mut cur = Some(class.name.clone());
    while let Some(n) = cur {
        related.insert(n.clone());
        cur = match model.get(&n) {
            Some(c) => c.parent.clone(),
            None => None,
        };
    }
    // Descendants: anyone whose chain passes through the class.
    for c in model.classes() {
        if chain(model, c).iter().any(|a| a.name == class.name) {
            related.insert(c.name.clone());
        }
    }
    related
}

pub fn bf_cbo(model: &ClassModel, class: &ClassDef) -> usize {
    let related = bf_related(model, class);
    let mut refs = BTreeSet::new();
    for f in &class.fields {
        if !entropia::model::is_primitive(&f.declared_type) {
            refs.insert(f.declared_type.clone());
        }
    }
    for m in &class.methods {
        for call in &m.calls {
            if let Receiver::Class(n) = &call.receiver {
                refs.insert(n.clone());
            }
        }
    }
    refs.difference(&related).count()
}

pub fn declaring(model: &ClassModel, start: &str, name: &str, arity: usize) -> String {
    let Some(class) = model.get(start) else {
        return start.to_string();
    };
    for c in chain(model, class) {
        if c.methods.iter().any(|m| m.name == name && m.arity == arity) {
            return c.name.clone();
        }
    }
    let top = chain(model, class).last().unwrap().parent.clone();
    top.unwrap_or_else(|| start.to_string())
}

pub fn bf_rfc(model: &ClassModel, class: &ClassDef) -> usize {
    let mut set: BTreeSet<(String, String, usize)> = BTreeSet::new();
    let mut owners = Vec::new();
    for c in chain(model, class) {
        for m in &c.methods {
            if !set.iter().any(|(_, n, a)| *n == m.name && *a == m.arity) {
                set.insert((c.name.clone(), m.name.clone(), m.arity));
                owners.push(m);
            }
        }
    }
    let mut remote = BTreeSet::new();
    for m in owners {
        for call in &m.calls {
            let target = match &call.receiver {
                Receiver::SelfRef => class.name.clone(),
                Receiver::Class(n) => n.clone(),
            };
            let decl = declaring(model, &target, &call.method, call.arity);
            remote.insert((decl, call.method.clone(), call.arity));
        }
    }
    set.union(&remote).count()
}

pub fn bf_lcom_components(class: &ClassDef) -> usize {
    let n = class.methods.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for (j, m) in class.methods.iter().enumerate() {
                if !seen[j] && !class.methods[i].field_uses.is_disjoint(&m.field_uses) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    components
}

pub fn bf_lcom_percent(class: &ClassDef) -> f64 {
    let (m, f) = (class.methods.len(), class.fields.len());
    if m == 0 || f == 0 {
        return 0.0;
    }
    let used: usize = class
        .fields
        .iter()
        .map(|fd| {
            class
                .methods
                .iter()
                .filter(|md| md.field_uses.contains(&fd.name))
                .count()
        })
        .sum();
    100.0 - 100.0 * used as f64 / (m * f) as f64
}

pub fn bf_vector(model: &ClassModel, class: &ClassDef, w: WmcWeighting) -> MetricVector {
    MetricVector {
        wmc: match w {
            WmcWeighting::Unit => class.methods.len(),
            WmcWeighting::Cyclomatic => class.methods.iter().map(|m| 1 + m.decision_points).sum(),
        },
        dit: bf_dit(model, class),
        noc: bf_noc(model, class),
        cbo: bf_cbo(model, class),
        rfc: bf_rfc(model, class),
        lcom_components: bf_lcom_components(class),
        lcom_percent: bf_lcom_percent(class),
    }
}

/// file, lines, blank, comment, code, executable, declarative.
pub const HAND_STATS: &[(&str, usize, usize, usize, usize, usize, usize)] = &[
    ("shapes.moo", 58, 14, 3, 41, 16, 8),
    ("accounts.moo", 54, 11, 2, 41, 16, 8),
    ("text.moo", 44, 7, 2, 35, 17, 5),
];
