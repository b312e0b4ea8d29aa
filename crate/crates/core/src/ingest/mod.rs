//! Building a [`ClassModel`] from MiniOO sources or an interchange file.

mod interchange;
mod lexer;
mod parser;

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use interchange::{
    dump_interchange, from_interchange_str, load_interchange, to_interchange_string,
    InterchangeError,
};
pub use parser::{parse_file, ParsedFile, RawCall, RawClass, RawMethod, RawReceiver};

use crate::model::{
    build_model, is_primitive, CallSite, ClassDef, ClassModel, MethodDef, ModelError, Receiver,
};

/// File extension of MiniOO sources.
pub const SOURCE_EXTENSION: &str = "moo";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{file}:{line}:{column}: syntax error: expected {}, found {found}", expected_list(.expected))]
    Syntax {
        file: String,
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
}

fn expected_list(expected: &[String]) -> String {
    match expected {
        [] => "valid input".to_string(),
        [one] => one.clone(),
        many => format!("one of {}", many.join(", ")),
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Interchange(#[from] InterchangeError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Parses MiniOO sources and resolves them into one model.
///
/// Names that are neither declared classes nor primitives (parents, field
/// types, call receivers) become external classes.
pub fn parse_source<P, T>(files: &[(P, T)]) -> Result<ClassModel, IngestError>
where
    P: AsRef<str>,
    T: AsRef<str>,
{
    let parsed = files
        .iter()
        .map(|(p, t)| parse_file(p.as_ref(), t.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(resolve(parsed)?)
}

/// Reads every `.moo` file under the given paths (files or directories),
/// in sorted path order, and parses them.
pub fn parse_paths<P: AsRef<Path>>(paths: &[P]) -> Result<ClassModel, IngestError> {
    let files = collect_sources(paths)?;
    parse_source(&files)
}

pub fn collect_sources<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<(String, String)>, IngestError> {
    let mut found = BTreeSet::new();
    for root in paths {
        let root = root.as_ref();
        if root.is_file() {
            found.insert(root.to_path_buf());
            continue;
        }
        for entry in walkdir::WalkDir::new(root) {
            let entry = entry.map_err(|e| IngestError::Io {
                path: root.to_path_buf(),
                source: e.into(),
            })?;
            let path = entry.path();
            if entry.file_type().is_file()
                && path.extension().is_some_and(|e| e == SOURCE_EXTENSION)
            {
                found.insert(path.to_path_buf());
            }
        }
    }
    found
        .into_iter()
        .map(|path| {
            std::fs::read_to_string(&path)
                .map(|text| (path.display().to_string(), text))
                .map_err(|source| IngestError::Io { path, source })
        })
        .collect()
}

/// Joins parsed files into a model: binds free names to fields, resolves
/// call receivers and marks unknown class names external.
pub fn resolve(files: Vec<ParsedFile>) -> Result<ClassModel, ModelError> {
    let stats = files.iter().map(|f| f.stats).sum();
    let raw: Vec<RawClass> = files.into_iter().flat_map(|f| f.classes).collect();

    let by_name: HashMap<&str, &RawClass> = raw.iter().map(|c| (c.name.as_str(), c)).collect();
    let mut externals = BTreeSet::new();
    let mut classes = Vec::with_capacity(raw.len());

    for class in &raw {
        // Visible fields: own first, then ancestors; stop on unknown parents or loops.
        let mut visible: HashMap<&str, &str> = HashMap::new();
        let mut cur = Some(class);
        let mut guard = 0;
        while let Some(c) = cur {
            for f in &c.fields {
                visible.entry(&f.name).or_insert(&f.declared_type);
            }
            guard += 1;
            cur = c
                .parent
                .as_deref()
                .and_then(|p| by_name.get(p).copied())
                .filter(|_| guard <= raw.len());
        }

        let note_type = |name: &str, externals: &mut BTreeSet<String>| {
            if !is_primitive(name) && !by_name.contains_key(name) {
                externals.insert(name.to_string());
            }
        };
        if let Some(p) = &class.parent {
            note_type(p, &mut externals);
        }
        for f in &class.fields {
            note_type(&f.declared_type, &mut externals);
        }

        let mut methods = Vec::with_capacity(class.methods.len());
        for m in &class.methods {
            let field_uses: BTreeSet<String> = m
                .free_names
                .iter()
                .filter(|n| visible.contains_key(n.as_str()))
                .cloned()
                .collect();
            let mut calls: Vec<CallSite> = Vec::with_capacity(m.calls.len());
            for call in &m.calls {
                let receiver = match &call.receiver {
                    RawReceiver::SelfRef => Receiver::SelfRef,
                    RawReceiver::Typed(t) => Receiver::Class(t.clone()),
                    RawReceiver::Free(n) => match visible.get(n.as_str()) {
                        Some(t) if is_primitive(t) => continue,
                        Some(t) => Receiver::Class(t.to_string()),
                        None => Receiver::Class(n.clone()),
                    },
                };
                if let Receiver::Class(name) = &receiver {
                    if name == &class.name {
                        // `A.f()` inside A is a self call.
                        calls.push(CallSite::new(Receiver::SelfRef, &call.method, call.arity));
                        continue;
                    }
                    note_type(name, &mut externals);
                }
                calls.push(CallSite::new(receiver, &call.method, call.arity));
            }
            methods.push(MethodDef {
                name: m.name.clone(),
                arity: m.params.len(),
                decision_points: m.decision_points,
                calls,
                field_uses,
                overrides: false,
            });
        }

        classes.push(ClassDef {
            name: class.name.clone(),
            parent: class.parent.clone(),
            fields: class.fields.clone(),
            methods,
        });
    }

    build_model(classes, externals, Some(stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{self, WmcWeighting};

    #[test]
    fn resolves_inherited_self_call() {
        let model = parse_source(&[
            ("a.moo", "class A { int x; void m() { x = 1; } }"),
            ("b.moo", "class B extends A { void n() { m(); } }"),
        ])
        .unwrap();
        let b = model.get("B").unwrap();
        assert_eq!(b.parent.as_deref(), Some("A"));
        let n = &b.methods[0];
        assert_eq!(n.calls, [CallSite::on_self("m", 0)]);
        assert!(!n.overrides);
        let a = model.get("A").unwrap();
        assert_eq!(a.methods[0].field_uses, BTreeSet::from(["x".to_string()]));
        assert_eq!(metrics::wmc(a, WmcWeighting::Unit), 1);
    }

    #[test]
    fn unknown_names_become_external() {
        let model = parse_source(&[(
            "x.moo",
            "class A extends Object { Logger log; void m() { log.info(); Util.now(); } }",
        )])
        .unwrap();
        let ext: Vec<&str> = model.externals().iter().map(String::as_str).collect();
        assert_eq!(ext, ["Logger", "Object", "Util"]);
        let calls = &model.get("A").unwrap().methods[0].calls;
        assert_eq!(calls[0].receiver, Receiver::class("Logger"));
        assert_eq!(
            model.get("A").unwrap().methods[0].field_uses,
            BTreeSet::from(["log".to_string()])
        );
    }

    #[test]
    fn inherited_field_receiver_and_use() {
        let model = parse_source(&[(
            "x.moo",
            "class A { Store s; int n; } class B extends A { void m() { s.put(n); } }",
        )])
        .unwrap();
        let m = &model.get("B").unwrap().methods[0];
        assert_eq!(m.calls, [CallSite::new(Receiver::class("Store"), "put", 1)]);
        assert_eq!(
            m.field_uses,
            BTreeSet::from(["n".to_string(), "s".to_string()])
        );
    }

    #[test]
    fn file_order_does_not_change_classes() {
        let a = ("a.moo", "class A { void m() { B.f(); } }");
        let b = ("b.moo", "class B extends A { void f() { } }");
        let m1 = parse_source(&[a, b]).unwrap();
        let m2 = parse_source(&[b, a]).unwrap();
        for c in m1.classes() {
            assert_eq!(Some(c), m2.get(&c.name));
        }
        assert_eq!(m1.stats(), m2.stats());
    }

    #[test]
    fn syntax_error_is_reported() {
        let err = parse_source(&[("c.moo", "class C { void p( } }")]).unwrap_err();
        assert!(err.to_string().starts_with("c.moo:1:19: syntax error"));
    }

    #[test]
    fn duplicate_class_across_files() {
        let err = parse_source(&[("a.moo", "class A { }"), ("b.moo", "class A { }")]).unwrap_err();
        assert!(matches!(
            err,
            IngestError::Model(ModelError::DuplicateClass(_))
        ));
    }
}
