//! Recursive-descent parser for MiniOO.
//!
//! ```text
//! file     := class*
//! class    := "class" IDENT ["extends" IDENT] "{" member* "}"
//! member   := type IDENT ";" | type IDENT "(" [param ("," param)*] ")" block
//! param    := type IDENT
//! type     := IDENT | "void" | "int" | "bool" | "string"
//! block    := "{" stmt* "}"
//! stmt     := block | ";" | type IDENT ["=" expr] ";" | expr ";"
//!           | "if" "(" expr ")" stmt ["else" stmt]
//!           | "while" "(" expr ")" stmt
//!           | "for" "(" [init] ";" [expr] ";" [expr] ")" stmt
//!           | "switch" "(" expr ")" "{" (("case" expr | "default") ":" stmt*)* "}"
//!           | "return" [expr] ";" | "break" ";"
//! expr     := or ["=" expr]
//! or       := and ("||" and)*          and := eq ("&&" eq)*
//! eq       := rel (("=="|"!=") rel)*   rel := add (("<"|">"|"<="|">=") add)*
//! add      := mul (("+"|"-") mul)*     mul := unary (("*"|"/"|"%") unary)*
//! unary    := ("!"|"-") unary | postfix
//! postfix  := primary ("." IDENT ["(" args ")"])*
//! primary  := INT | STRING | "true" | "false" | "null" | "this"
//!           | IDENT ["(" args ")"] | "new" IDENT "(" args ")" | "(" expr ")"
//! ```
//!
//! The parser does no name resolution beyond local scopes: identifiers that
//! are not locals or parameters are kept as free names and resolved against
//! fields and classes once every file has been read.

use std::collections::{BTreeSet, HashMap};

use super::lexer::{lex, Keyword, Tok, Token};
use super::ParseError;
use crate::model::{FieldDef, SourceStats};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawReceiver {
    SelfRef,
    /// Static type known from a local, parameter or `new` expression.
    Typed(String),
    /// Name not bound locally: a field of the class or a class name.
    Free(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCall {
    pub receiver: RawReceiver,
    pub method: String,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMethod {
    pub name: String,
    pub return_type: String,
    pub params: Vec<FieldDef>,
    pub decision_points: usize,
    pub calls: Vec<RawCall>,
    /// Free identifiers read or written; field uses once resolved.
    pub free_names: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawClass {
    pub name: String,
    pub parent: Option<String>,
    pub fields: Vec<FieldDef>,
    pub methods: Vec<RawMethod>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFile {
    pub path: String,
    pub classes: Vec<RawClass>,
    pub stats: SourceStats,
}

/// Value category of an expression, as far as receiver resolution cares.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Val {
    This,
    Typed(String),
    Free(String),
    Unknown,
}

struct Body {
    decision_points: usize,
    calls: Vec<RawCall>,
    free_names: BTreeSet<String>,
    scopes: Vec<HashMap<String, String>>,
}

impl Body {
    fn lookup(&self, name: &str) -> Option<&str> {
        self.scopes
            .iter()
            .rev()
            .find_map(|s| s.get(name))
            .map(String::as_str)
    }

    fn declare(&mut self, name: &str, ty: &str) {
        self.scopes
            .last_mut()
            .expect("scope stack is never empty")
            .insert(name.to_string(), ty.to_string());
    }
}

struct Parser<'a> {
    path: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    executable: usize,
    declarative: usize,
}

type PResult<T> = Result<T, ParseError>;

pub fn parse_file(path: &str, text: &str) -> PResult<ParsedFile> {
    let lexed = lex(text).map_err(|e| ParseError::Syntax {
        file: path.to_string(),
        line: e.line,
        column: e.column,
        expected: vec![],
        found: e.message,
    })?;

    let mut stats = SourceStats {
        files: 1,
        ..SourceStats::default()
    };
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        stats.lines += 1;
        if line.trim().is_empty() {
            stats.blank += 1;
        } else if lexed.code_lines.contains(&n) {
            stats.code += 1;
        } else {
            debug_assert!(lexed.comment_lines.contains(&n));
            stats.comment += 1;
        }
    }

    let mut p = Parser {
        path,
        tokens: lexed.tokens,
        pos: 0,
        executable: 0,
        declarative: 0,
    };
    let mut classes = Vec::new();
    while !p.at_eof() {
        classes.push(p.class()?);
    }
    stats.executable = p.executable;
    stats.declarative = p.declarative;
    Ok(ParsedFile {
        path: path.to_string(),
        classes,
        stats,
    })
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if !matches!(t.tok, Tok::Eof) {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = &self.tokens[self.pos];
        Err(ParseError::Syntax {
            file: self.path.to_string(),
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.to_string(),
        })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_kw(&self, k: Keyword) -> bool {
        matches!(self.peek(), Tok::Kw(q) if *q == k)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.error(&[&format!("`{p}`")])
        }
    }

    fn expect_kw(&mut self, k: Keyword) -> PResult<()> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.error(&[&format!("`{}`", k.as_str())])
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn starts_type(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_)) || matches!(self.peek(), Tok::Kw(k) if k.is_type())
    }

    fn ty(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            Tok::Kw(k) if k.is_type() => {
                self.bump();
                Ok(k.as_str().to_string())
            }
            _ => self.error(&["type"]),
        }
    }

    fn class(&mut self) -> PResult<RawClass> {
        let line = self.tokens[self.pos].line;
        self.expect_kw(Keyword::Class)?;
        let name = self.ident()?;
        let parent = if self.is_kw(Keyword::Extends) {
            self.bump();
            Some(self.ident()?)
        } else {
            None
        };
        self.expect_punct("{")?;
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        while !self.is_punct("}") {
            if !self.starts_type() {
                return self.error(&["type", "`}`"]);
            }
            let ty = self.ty()?;
            let member = self.ident()?;
            if self.eat_punct(";") {
                self.declarative += 1;
                fields.push(FieldDef::new(member, ty));
            } else if self.is_punct("(") {
                methods.push(self.method(member, ty)?);
            } else {
                return self.error(&["`;`", "`(`"]);
            }
        }
        self.bump();
        Ok(RawClass {
            name,
            parent,
            fields,
            methods,
            line,
        })
    }

    fn method(&mut self, name: String, return_type: String) -> PResult<RawMethod> {
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if !self.is_punct(")") {
            loop {
                if !self.starts_type() {
                    return self.error(&["type", "`)`"]);
                }
                let ty = self.ty()?;
                let pname = self.ident()?;
                params.push(FieldDef::new(pname, ty));
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        let mut body = Body {
            decision_points: 0,
            calls: Vec::new(),
            free_names: BTreeSet::new(),
            scopes: vec![params
                .iter()
                .map(|p| (p.name.clone(), p.declared_type.clone()))
                .collect()],
        };
        self.block(&mut body)?;
        Ok(RawMethod {
            name,
            return_type,
            params,
            decision_points: body.decision_points,
            calls: body.calls,
            free_names: body.free_names,
        })
    }

    fn block(&mut self, b: &mut Body) -> PResult<()> {
        self.expect_punct("{")?;
        b.scopes.push(HashMap::new());
        while !self.is_punct("}") {
            if self.at_eof() {
                return self.error(&["`}`"]);
            }
            self.stmt(b)?;
        }
        self.bump();
        b.scopes.pop();
        Ok(())
    }

    /// `type IDENT` ahead: a primitive keyword, or two identifiers in a row.
    fn at_local_decl(&self) -> bool {
        match self.peek() {
            Tok::Kw(k) => k.is_type(),
            Tok::Ident(_) => matches!(self.peek_at(1), Tok::Ident(_)),
            _ => false,
        }
    }

    fn local_decl(&mut self, b: &mut Body) -> PResult<()> {
        let ty = self.ty()?;
        let name = self.ident()?;
        if self.eat_punct("=") {
            self.expr(b)?;
        }
        b.declare(&name, &ty);
        Ok(())
    }

    fn stmt(&mut self, b: &mut Body) -> PResult<()> {
        if self.is_punct("{") {
            return self.block(b);
        }
        if self.eat_punct(";") {
            return Ok(());
        }
        if self.at_local_decl() {
            self.local_decl(b)?;
            self.declarative += 1;
            return self.expect_punct(";");
        }
        let kw = match self.peek() {
            Tok::Kw(k) => Some(*k),
            _ => None,
        };
        match kw {
            Some(Keyword::If) => {
                self.bump();
                self.executable += 1;
                b.decision_points += 1;
                self.paren_expr(b)?;
                self.stmt(b)?;
                if self.is_kw(Keyword::Else) {
                    self.bump();
                    self.stmt(b)?;
                }
                Ok(())
            }
            Some(Keyword::While) => {
                self.bump();
                self.executable += 1;
                b.decision_points += 1;
                self.paren_expr(b)?;
                self.stmt(b)
            }
            Some(Keyword::For) => {
                self.bump();
                self.executable += 1;
                b.decision_points += 1;
                self.expect_punct("(")?;
                b.scopes.push(HashMap::new());
                if !self.is_punct(";") {
                    if self.at_local_decl() {
                        self.local_decl(b)?;
                    } else {
                        self.expr(b)?;
                    }
                }
                self.expect_punct(";")?;
                if !self.is_punct(";") {
                    self.expr(b)?;
                }
                self.expect_punct(";")?;
                if !self.is_punct(")") {
                    self.expr(b)?;
                }
                self.expect_punct(")")?;
                self.stmt(b)?;
                b.scopes.pop();
                Ok(())
            }
            Some(Keyword::Switch) => {
                self.bump();
                self.executable += 1;
                self.paren_expr(b)?;
                self.expect_punct("{")?;
                b.scopes.push(HashMap::new());
                while !self.is_punct("}") {
                    if self.is_kw(Keyword::Case) {
                        self.bump();
                        b.decision_points += 1;
                        self.expr(b)?;
                    } else if self.is_kw(Keyword::Default) {
                        self.bump();
                    } else {
                        return self.error(&["`case`", "`default`", "`}`"]);
                    }
                    self.expect_punct(":")?;
                    while !(self.is_punct("}")
                        || self.is_kw(Keyword::Case)
                        || self.is_kw(Keyword::Default))
                    {
                        if self.at_eof() {
                            return self.error(&["`}`"]);
                        }
                        self.stmt(b)?;
                    }
                }
                self.bump();
                b.scopes.pop();
                Ok(())
            }
            Some(Keyword::Return) => {
                self.bump();
                self.executable += 1;
                if !self.is_punct(";") {
                    self.expr(b)?;
                }
                self.expect_punct(";")
            }
            Some(Keyword::Break) => {
                self.bump();
                self.executable += 1;
                self.expect_punct(";")
            }
            _ => {
                self.executable += 1;
                self.expr(b)?;
                self.expect_punct(";")
            }
        }
    }

    fn paren_expr(&mut self, b: &mut Body) -> PResult<()> {
        self.expect_punct("(")?;
        self.expr(b)?;
        self.expect_punct(")")
    }

    fn expr(&mut self, b: &mut Body) -> PResult<Val> {
        let lhs = self.binary(b, 0)?;
        if self.eat_punct("=") {
            self.expr(b)?;
        }
        Ok(lhs)
    }

    fn binary(&mut self, b: &mut Body, level: usize) -> PResult<Val> {
        const LEVELS: [&[&str]; 6] = [
            &["||"],
            &["&&"],
            &["==", "!="],
            &["<", ">", "<=", ">="],
            &["+", "-"],
            &["*", "/", "%"],
        ];
        if level == LEVELS.len() {
            return self.unary(b);
        }
        let mut val = self.binary(b, level + 1)?;
        while LEVELS[level].iter().any(|op| self.is_punct(op)) {
            self.bump();
            self.binary(b, level + 1)?;
            val = Val::Unknown;
        }
        Ok(val)
    }

    fn unary(&mut self, b: &mut Body) -> PResult<Val> {
        if self.is_punct("!") || self.is_punct("-") {
            self.bump();
            self.unary(b)?;
            return Ok(Val::Unknown);
        }
        self.postfix(b)
    }

    fn args(&mut self, b: &mut Body) -> PResult<usize> {
        self.expect_punct("(")?;
        let mut n = 0;
        if !self.is_punct(")") {
            loop {
                self.expr(b)?;
                n += 1;
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        Ok(n)
    }

    fn postfix(&mut self, b: &mut Body) -> PResult<Val> {
        let mut val = self.primary(b)?;
        while self.eat_punct(".") {
            let member = self.ident()?;
            if self.is_punct("(") {
                let arity = self.args(b)?;
                let receiver = match val {
                    Val::This => Some(RawReceiver::SelfRef),
                    Val::Typed(t) if crate::model::is_primitive(&t) => None,
                    Val::Typed(t) => Some(RawReceiver::Typed(t)),
                    Val::Free(n) => Some(RawReceiver::Free(n)),
                    Val::Unknown => None,
                };
                if let Some(receiver) = receiver {
                    b.calls.push(RawCall {
                        receiver,
                        method: member,
                        arity,
                    });
                }
                val = Val::Unknown;
            } else {
                val = match val {
                    // `this.x` names a field of the enclosing class.
                    Val::This => {
                        b.free_names.insert(member.clone());
                        Val::Free(member)
                    }
                    _ => Val::Unknown,
                };
            }
        }
        Ok(val)
    }

    fn primary(&mut self, b: &mut Body) -> PResult<Val> {
        let t = self.peek().clone();
        match t {
            Tok::Int(_) => {
                self.bump();
                Ok(Val::Typed("int".into()))
            }
            Tok::Str(_) => {
                self.bump();
                Ok(Val::Typed("string".into()))
            }
            Tok::Kw(Keyword::True | Keyword::False) => {
                self.bump();
                Ok(Val::Typed("bool".into()))
            }
            Tok::Kw(Keyword::Null) => {
                self.bump();
                Ok(Val::Unknown)
            }
            Tok::Kw(Keyword::This) => {
                self.bump();
                Ok(Val::This)
            }
            Tok::Kw(Keyword::New) => {
                self.bump();
                let ty = self.ident()?;
                self.args(b)?;
                Ok(Val::Typed(ty))
            }
            Tok::Punct("(") => {
                self.bump();
                self.expr(b)?;
                self.expect_punct(")")?;
                Ok(Val::Unknown)
            }
            Tok::Ident(name) => {
                self.bump();
                if self.is_punct("(") {
                    let arity = self.args(b)?;
                    b.calls.push(RawCall {
                        receiver: RawReceiver::SelfRef,
                        method: name,
                        arity,
                    });
                    return Ok(Val::Unknown);
                }
                match b.lookup(&name) {
                    Some(ty) => Ok(Val::Typed(ty.to_string())),
                    None => {
                        b.free_names.insert(name.clone());
                        Ok(Val::Free(name))
                    }
                }
            }
            _ => self.error(&["expression"]),
        }
    }
}
