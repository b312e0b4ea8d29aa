//! MiniOO tokenizer. Also records which lines carry code and which carry
//! comments, for line classification.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    Kw(Keyword),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Class,
    Extends,
    If,
    Else,
    While,
    For,
    Return,
    Switch,
    Case,
    Default,
    Break,
    New,
    This,
    True,
    False,
    Null,
    Void,
    Int,
    Bool,
    String,
}

impl Keyword {
    fn from_ident(s: &str) -> Option<Self> {
        use Keyword::*;
        Some(match s {
            "class" => Class,
            "extends" => Extends,
            "if" => If,
            "else" => Else,
            "while" => While,
            "for" => For,
            "return" => Return,
            "switch" => Switch,
            "case" => Case,
            "default" => Default,
            "break" => Break,
            "new" => New,
            "this" => This,
            "true" => True,
            "false" => False,
            "null" => Null,
            "void" => Void,
            "int" => Int,
            "bool" => Bool,
            "string" => String,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        use Keyword::*;
        match self {
            Class => "class",
            Extends => "extends",
            If => "if",
            Else => "else",
            While => "while",
            For => "for",
            Return => "return",
            Switch => "switch",
            Case => "case",
            Default => "default",
            Break => "break",
            New => "new",
            This => "this",
            True => "true",
            False => "false",
            Null => "null",
            Void => "void",
            Int => "int",
            Bool => "bool",
            String => "string",
        }
    }

    pub fn is_type(self) -> bool {
        matches!(
            self,
            Keyword::Void | Keyword::Int | Keyword::Bool | Keyword::String
        )
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(s) => write!(f, "integer `{s}`"),
            Tok::Str(_) => f.write_str("string literal"),
            Tok::Kw(k) => write!(f, "`{}`", k.as_str()),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => f.write_str("end of file"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    /// 1-based lines holding at least one token.
    pub code_lines: BTreeSet<usize>,
    /// 1-based lines touched by a comment.
    pub comment_lines: BTreeSet<usize>,
}

// Longest first, so `<=` wins over `<`.
const PUNCTS: [&str; 23] = [
    "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")", ";", ",", ".", "=", "<", ">", "+", "-",
    "*", "/", "%", "!", ":",
];

pub fn lex(src: &str) -> Result<Lexed, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Lexed::default();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            out.comment_lines.insert(line);
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let (start_line, start_col) = (line, col);
            out.comment_lines.insert(line);
            advance(&mut i, &mut line, &mut col);
            advance(&mut i, &mut line, &mut col);
            loop {
                if i >= chars.len() {
                    return Err(LexError {
                        line: start_line,
                        column: start_col,
                        message: "unterminated block comment".into(),
                    });
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    advance(&mut i, &mut line, &mut col);
                    advance(&mut i, &mut line, &mut col);
                    break;
                }
                advance(&mut i, &mut line, &mut col);
                out.comment_lines.insert(line);
            }
            continue;
        }

        let (tline, tcol) = (line, col);
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut line, &mut col);
            }
            let word: String = chars[start..i].iter().collect();
            match Keyword::from_ident(&word) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(word),
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col);
            }
            Tok::Int(chars[start..i].iter().collect())
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col);
            let start = i;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\n' {
                    return Err(LexError {
                        line: tline,
                        column: tcol,
                        message: "unterminated string literal".into(),
                    });
                }
                if chars[i] == '\\' && i + 1 < chars.len() {
                    advance(&mut i, &mut line, &mut col);
                }
                advance(&mut i, &mut line, &mut col);
            }
            if i >= chars.len() {
                return Err(LexError {
                    line: tline,
                    column: tcol,
                    message: "unterminated string literal".into(),
                });
            }
            let s: String = chars[start..i].iter().collect();
            advance(&mut i, &mut line, &mut col);
            Tok::Str(s)
        } else {
            let rest = &chars[i..];
            let p = PUNCTS
                .iter()
                .find(|p| p.chars().zip(rest.iter()).all(|(a, b)| a == *b) && rest.len() >= p.len())
                .ok_or_else(|| LexError {
                    line,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                })?;
            for _ in 0..p.len() {
                advance(&mut i, &mut line, &mut col);
            }
            Tok::Punct(p)
        };
        out.code_lines.insert(tline);
        out.tokens.push(Token {
            tok,
            line: tline,
            column: tcol,
        });
    }
    out.tokens.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}
