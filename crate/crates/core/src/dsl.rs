//! The `.quiver` text format: vertex and arrow declarations followed by an
//! optional potential, relation list, or differential assignments, one
//! statement per line with `#` comments.
//!
//!   vertex <id> [frozen]
//!   arrow <id> : <src> -> <tgt> [deg <int>] [frozen]
//!   potential = <expr>
//!   relation <expr>
//!   differential <arrow> = <expr>
//!
//! Expressions are signed sums of terms `[<int>[/<int>]*]<word>`, a word
//! being arrow ids joined by `*` read as "left after right", or a lone
//! `e_<vertex>` idempotent, or the literal `0`. Every word's composability
//! is checked at parse time. A file carries at most one of the potential,
//! relation, and differential sections; which one decides the model kind.
//!
//! `print` emits the normalized form, and parse(print(parse(f))) equals
//! parse(f) on every well-formed file.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{AlgebraElement, AlgebraError, PathWord};
use crate::completions::IceQuiverWithPotential;
use crate::dg::{DgError, DgPresentation};
use crate::potential::cyclic_normalize;
use crate::presentation::Presentation;
use crate::quiver::GradedQuiver;
use crate::scalar::Q;
use num::bigint::BigInt;
use num::Zero;

/// A parsed `.quiver` file, classified by which optional section it used.
#[derive(Debug, Clone)]
pub enum QuiverModel {
    Quiver(Arc<GradedQuiver>),
    WithPotential(IceQuiverWithPotential),
    Presentation(Presentation),
    Dg(DgPresentation),
}

impl QuiverModel {
    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        match self {
            QuiverModel::Quiver(q) => q,
            QuiverModel::WithPotential(i) => i.quiver(),
            QuiverModel::Presentation(p) => p.quiver(),
            QuiverModel::Dg(d) => d.quiver(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            QuiverModel::Quiver(_) => "quiver",
            QuiverModel::WithPotential(_) => "quiver with potential",
            QuiverModel::Presentation(_) => "presentation",
            QuiverModel::Dg(_) => "dg presentation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagCode {
    Syntax,
    UnknownId,
    NotComposable,
    FrozenEndpoints,
    DuplicateId,
    NoVertices,
    MixedSections,
    NotCyclic,
    BadElement,
    DuplicateAssignment,
}

impl DiagCode {
    pub fn code(&self) -> &'static str {
        match self {
            DiagCode::Syntax => "E01",
            DiagCode::UnknownId => "E02",
            DiagCode::NotComposable => "E03",
            DiagCode::FrozenEndpoints => "E04",
            DiagCode::DuplicateId => "E05",
            DiagCode::NoVertices => "E06",
            DiagCode::MixedSections => "E07",
            DiagCode::NotCyclic => "E08",
            DiagCode::BadElement => "E09",
            DiagCode::DuplicateAssignment => "E10",
        }
    }
}

/// A parse failure with a 1-based line and byte column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    fn new(code: DiagCode, line: usize, col: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, col {}: [{}] {}",
            self.line,
            self.col,
            self.code.code(),
            self.message
        )
    }
}

impl std::error::Error for Diagnostic {}

fn is_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Whitespace-separated tokens with their 1-based byte columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

struct VertexDecl {
    name: String,
    frozen: bool,
    line: usize,
}

struct ArrowDecl {
    name: String,
    source: String,
    target: String,
    degree: i64,
    frozen: bool,
    line: usize,
    col: usize,
}

enum ExprStmt {
    Potential,
    Relation,
    /// arrow name with its column in the declaration line
    Differential(String, usize),
}

/// Parse a `.quiver` file into a validated model or the first diagnostic.
pub fn parse(text: &str) -> Result<QuiverModel, Diagnostic> {
    let mut vertices: Vec<VertexDecl> = Vec::new();
    let mut arrows: Vec<ArrowDecl> = Vec::new();
    // (statement, line number, expr column, expr text)
    let mut exprs: Vec<(ExprStmt, usize, usize, String)> = Vec::new();

    for (ix, raw) in text.lines().enumerate() {
        let line_no = ix + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let (kcol, keyword) = toks[0];
        match keyword {
            "vertex" => {
                let name = expect_id(&toks, 1, line_no, "vertex id")?;
                let frozen = match toks.get(2) {
                    None => false,
                    Some((_, "frozen")) if toks.len() == 3 => true,
                    Some(&(c, t)) => {
                        return Err(Diagnostic::new(
                            DiagCode::Syntax,
                            line_no,
                            c,
                            format!("expected `frozen` or end of line, found `{t}`"),
                        ))
                    }
                };
                vertices.push(VertexDecl {
                    name,
                    frozen,
                    line: line_no,
                });
            }
            "arrow" => {
                let name = expect_id(&toks, 1, line_no, "arrow id")?;
                expect_token(&toks, 2, ":", line_no)?;
                let source = expect_id(&toks, 3, line_no, "source vertex")?;
                expect_token(&toks, 4, "->", line_no)?;
                let target = expect_id(&toks, 5, line_no, "target vertex")?;
                let mut degree = 0i64;
                let mut frozen = false;
                let mut i = 6;
                while i < toks.len() {
                    match toks[i].1 {
                        "deg" => {
                            let (c, t) = *toks.get(i + 1).ok_or_else(|| {
                                Diagnostic::new(
                                    DiagCode::Syntax,
                                    line_no,
                                    toks[i].0,
                                    "`deg` needs an integer",
                                )
                            })?;
                            degree = t.parse().map_err(|_| {
                                Diagnostic::new(
                                    DiagCode::Syntax,
                                    line_no,
                                    c,
                                    format!("`{t}` is not an integer degree"),
                                )
                            })?;
                            i += 2;
                        }
                        "frozen" => {
                            frozen = true;
                            i += 1;
                        }
                        other => {
                            return Err(Diagnostic::new(
                                DiagCode::Syntax,
                                line_no,
                                toks[i].0,
                                format!("unexpected `{other}` in arrow declaration"),
                            ))
                        }
                    }
                }
                arrows.push(ArrowDecl {
                    name,
                    source,
                    target,
                    degree,
                    frozen,
                    line: line_no,
                    col: toks[1].0,
                });
            }
            "potential" => {
                expect_token(&toks, 1, "=", line_no)?;
                let (col, body) = rest_after(line, toks[1].0);
                exprs.push((ExprStmt::Potential, line_no, col, body));
            }
            "relation" => {
                let (col, body) = rest_after(line, kcol + keyword.len() - 1);
                if body.trim().is_empty() {
                    return Err(Diagnostic::new(
                        DiagCode::Syntax,
                        line_no,
                        kcol,
                        "`relation` needs an expression",
                    ));
                }
                exprs.push((ExprStmt::Relation, line_no, col, body));
            }
            "differential" => {
                let name = expect_id(&toks, 1, line_no, "arrow id")?;
                expect_token(&toks, 2, "=", line_no)?;
                let (col, body) = rest_after(line, toks[2].0);
                exprs.push((ExprStmt::Differential(name, toks[1].0), line_no, col, body));
            }
            other => {
                return Err(Diagnostic::new(
                    DiagCode::Syntax,
                    line_no,
                    kcol,
                    format!("unknown statement `{other}`"),
                ))
            }
        }
    }

    if vertices.is_empty() {
        return Err(Diagnostic::new(
            DiagCode::NoVertices,
            1,
            1,
            "no vertices declared",
        ));
    }

    // referential checks before handing to the builder, so positions are exact
    let mut seen_v: BTreeMap<&str, usize> = BTreeMap::new();
    for v in &vertices {
        if seen_v.insert(&v.name, v.line).is_some() {
            return Err(Diagnostic::new(
                DiagCode::DuplicateId,
                v.line,
                1,
                format!("vertex `{}` is declared twice", v.name),
            ));
        }
    }
    let is_frozen_v =
        |name: &str| vertices.iter().any(|v| v.name == name && v.frozen);
    let mut seen_a: BTreeMap<&str, usize> = BTreeMap::new();
    for a in &arrows {
        if seen_a.insert(&a.name, a.line).is_some() {
            return Err(Diagnostic::new(
                DiagCode::DuplicateId,
                a.line,
                a.col,
                format!("arrow `{}` is declared twice", a.name),
            ));
        }
        for end in [&a.source, &a.target] {
            if !seen_v.contains_key(end.as_str()) {
                return Err(Diagnostic::new(
                    DiagCode::UnknownId,
                    a.line,
                    a.col,
                    format!("arrow `{}` references unknown vertex `{end}`", a.name),
                ));
            }
        }
        if a.frozen && !(is_frozen_v(&a.source) && is_frozen_v(&a.target)) {
            return Err(Diagnostic::new(
                DiagCode::FrozenEndpoints,
                a.line,
                a.col,
                format!("frozen arrow `{}` must run between frozen vertices", a.name),
            ));
        }
    }

    let mut b = GradedQuiver::builder();
    for v in &vertices {
        b = if v.frozen {
            b.frozen_vertex(&v.name)
        } else {
            b.vertex(&v.name)
        };
    }
    for a in &arrows {
        b = if a.frozen {
            b.frozen_arrow(&a.name, &a.source, &a.target, a.degree)
        } else {
            b.arrow(&a.name, &a.source, &a.target, a.degree)
        };
    }
    let quiver = b.build().expect("declarations were pre-validated");

    let mut potential: Option<(usize, usize, AlgebraElement)> = None;
    let mut relations: Vec<(usize, usize, AlgebraElement)> = Vec::new();
    let mut differentials: Vec<(usize, usize, usize, String, AlgebraElement)> = Vec::new();
    let mut section: Option<(&'static str, usize)> = None;
    for (stmt, line, col, body) in exprs {
        let elem = parse_expr(&quiver, &body, line, col)?;
        let name = match &stmt {
            ExprStmt::Potential => "potential",
            ExprStmt::Relation => "relation",
            ExprStmt::Differential(..) => "differential",
        };
        match section {
            None => section = Some((name, line)),
            Some((prev, _)) if prev != name => {
                return Err(Diagnostic::new(
                    DiagCode::MixedSections,
                    line,
                    1,
                    format!("`{name}` cannot be mixed with `{prev}` in one file"),
                ));
            }
            _ => {}
        }
        match stmt {
            ExprStmt::Potential => {
                if potential.is_some() {
                    return Err(Diagnostic::new(
                        DiagCode::DuplicateAssignment,
                        line,
                        1,
                        "a file carries at most one potential",
                    ));
                }
                potential = Some((line, col, elem));
            }
            ExprStmt::Relation => relations.push((line, col, elem)),
            ExprStmt::Differential(arrow, name_col) => {
                if differentials.iter().any(|(_, _, _, n, _)| *n == arrow) {
                    return Err(Diagnostic::new(
                        DiagCode::DuplicateAssignment,
                        line,
                        1,
                        format!("arrow `{arrow}` is assigned a differential twice"),
                    ));
                }
                differentials.push((line, col, name_col, arrow, elem));
            }
        }
    }

    if let Some((line, col, elem)) = potential {
        let w = cyclic_normalize(&elem)
            .map_err(|e| Diagnostic::new(DiagCode::NotCyclic, line, col, e.to_string()))?;
        let ice = IceQuiverWithPotential::new(&quiver, w)
            .map_err(|e| Diagnostic::new(DiagCode::BadElement, line, col, e.to_string()))?;
        return Ok(QuiverModel::WithPotential(ice));
    }
    if !relations.is_empty() {
        for (line, col, r) in &relations {
            Presentation::new(&quiver, vec![r.clone()])
                .map_err(|e| Diagnostic::new(DiagCode::BadElement, *line, *col, e.to_string()))?;
        }
        let rs = relations.into_iter().map(|(_, _, r)| r).collect();
        let p = Presentation::new(&quiver, rs).expect("each relation validated individually");
        return Ok(QuiverModel::Presentation(p));
    }
    if !differentials.is_empty() {
        let mut map = BTreeMap::new();
        let mut where_is: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for (line, col, name_col, name, elem) in differentials {
            let ix = quiver.arrow_named(&name).ok_or_else(|| {
                Diagnostic::new(
                    DiagCode::UnknownId,
                    line,
                    name_col,
                    format!("no arrow named `{name}`"),
                )
            })?;
            where_is.insert(name, (line, col));
            map.insert(ix, elem);
        }
        let dg = DgPresentation::new_unverified(&quiver, map).map_err(|e| {
            let (line, col) = match &e {
                DgError::NotHomogeneous { arrow, .. } | DgError::WrongEndpoints { arrow } => {
                    where_is.get(arrow).copied().unwrap_or((1, 1))
                }
                _ => (1, 1),
            };
            Diagnostic::new(DiagCode::BadElement, line, col, e.to_string())
        })?;
        return Ok(QuiverModel::Dg(dg));
    }
    Ok(QuiverModel::Quiver(quiver))
}

fn expect_id(
    toks: &[(usize, &str)],
    ix: usize,
    line: usize,
    what: &str,
) -> Result<String, Diagnostic> {
    match toks.get(ix) {
        Some(&(c, t)) if t.chars().all(is_id_char) && !t.is_empty() => {
            let _ = c;
            Ok(t.to_string())
        }
        Some(&(c, t)) => Err(Diagnostic::new(
            DiagCode::Syntax,
            line,
            c,
            format!("expected {what}, found `{t}`"),
        )),
        None => Err(Diagnostic::new(
            DiagCode::Syntax,
            line,
            toks.last().map(|(c, t)| c + t.len()).unwrap_or(1),
            format!("expected {what}"),
        )),
    }
}

fn expect_token(
    toks: &[(usize, &str)],
    ix: usize,
    want: &str,
    line: usize,
) -> Result<(), Diagnostic> {
    match toks.get(ix) {
        Some(&(_, t)) if t == want => Ok(()),
        Some(&(c, t)) => Err(Diagnostic::new(
            DiagCode::Syntax,
            line,
            c,
            format!("expected `{want}`, found `{t}`"),
        )),
        None => Err(Diagnostic::new(
            DiagCode::Syntax,
            line,
            toks.last().map(|(c, t)| c + t.len()).unwrap_or(1),
            format!("expected `{want}`"),
        )),
    }
}

/// The tail of `line` strictly after the token starting at 1-based `col`,
/// returned with the 1-based column where the tail begins.
fn rest_after(line: &str, col: usize) -> (usize, String) {
    let mut i = col - 1;
    let bytes = line.as_bytes();
    while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
        i += 1;
    }
    let tail = line[i..].trim_start();
    let skipped = line.len() - i - tail.len();
    (i + skipped + 1, tail.to_string())
}

struct ExprScanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    base_col: usize,
}

impl<'a> ExprScanner<'a> {
    fn col(&self) -> usize {
        self.base_col + self.pos
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err(&self, code: DiagCode, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(code, self.line, self.col(), msg)
    }

    fn take_id(&mut self) -> Option<(usize, &'a str)> {
        let start = self.pos;
        while self
            .peek()
            .map(|c| is_id_char(c as char))
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some((
                self.base_col + start,
                std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ids"),
            ))
        }
    }

    fn take_int(&mut self) -> Result<BigInt, Diagnostic> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.err(DiagCode::Syntax, "expected an integer"))
    }
}

/// Parse one expression into an element of the path algebra, checking every
/// word's composability and id resolution.
fn parse_expr(
    quiver: &Arc<GradedQuiver>,
    body: &str,
    line: usize,
    base_col: usize,
) -> Result<AlgebraElement, Diagnostic> {
    let mut s = ExprScanner {
        src: body.as_bytes(),
        pos: 0,
        line,
        base_col,
    };
    s.skip_ws();
    if s.peek().is_none() {
        return Err(s.err(DiagCode::Syntax, "empty expression"));
    }
    if body.trim() == "0" {
        return Ok(AlgebraElement::zero(quiver));
    }
    let mut out = AlgebraElement::zero(quiver);
    let mut first = true;
    loop {
        s.skip_ws();
        let sign = match s.peek() {
            Some(b'+') => {
                s.pos += 1;
                Q::from_integer(BigInt::from(1))
            }
            Some(b'-') => {
                s.pos += 1;
                Q::from_integer(BigInt::from(-1))
            }
            Some(_) if first => Q::from_integer(BigInt::from(1)),
            Some(c) => {
                return Err(s.err(
                    DiagCode::Syntax,
                    format!("expected `+` or `-`, found `{}`", c as char),
                ))
            }
            None => break,
        };
        first = false;
        s.skip_ws();
        let term = parse_term(quiver, &mut s)?;
        out = &out + &term.scale(&sign);
        s.skip_ws();
        if s.peek().is_none() {
            break;
        }
    }
    if out.is_zero() {
        return Err(Diagnostic::new(
            DiagCode::BadElement,
            line,
            base_col,
            "expression cancels to zero; write `0` to mean zero",
        ));
    }
    Ok(out)
}

fn parse_term(
    quiver: &Arc<GradedQuiver>,
    s: &mut ExprScanner<'_>,
) -> Result<AlgebraElement, Diagnostic> {
    let mut coef = Q::from_integer(BigInt::from(1));
    // a leading all-digit factor is the coefficient, optionally with /den
    if s.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
        let save = s.pos;
        let num = s.take_int()?;
        let all_digits_then_id = s
            .peek()
            .map(|c| is_id_char(c as char))
            .unwrap_or(false);
        if all_digits_then_id {
            // an id with a digit prefix, not a coefficient: rewind
            s.pos = save;
        } else {
            let den = if s.peek() == Some(b'/') {
                s.pos += 1;
                let d = s.take_int()?;
                if d.is_zero() {
                    return Err(s.err(DiagCode::Syntax, "zero denominator"));
                }
                d
            } else {
                BigInt::from(1)
            };
            coef = Q::new(num, den);
            if coef.is_zero() {
                return Err(s.err(DiagCode::Syntax, "zero coefficient"));
            }
            if s.peek() != Some(b'*') {
                return Err(s.err(DiagCode::Syntax, "a coefficient needs `*<word>`"));
            }
            s.pos += 1;
        }
    }
    // word: ids joined by `*`
    let mut ids: Vec<(usize, &str)> = Vec::new();
    loop {
        match s.take_id() {
            Some(pair) => ids.push(pair),
            None => {
                return Err(s.err(DiagCode::Syntax, "expected an arrow id"));
            }
        }
        if s.peek() == Some(b'*') {
            s.pos += 1;
        } else {
            break;
        }
    }
    if ids.len() == 1 {
        if let Some(v) = ids[0].1.strip_prefix("e_") {
            if quiver.arrow_named(ids[0].1).is_none() {
                if let Some(ix) = quiver.vertex_named(v) {
                    let w = PathWord::Vertex(ix);
                    return Ok(AlgebraElement::monomial(quiver, w, coef));
                }
            }
        }
    }
    let mut seq = Vec::with_capacity(ids.len());
    for (col, name) in &ids {
        match quiver.arrow_named(name) {
            Some(ix) => seq.push(ix),
            None => {
                return Err(Diagnostic::new(
                    DiagCode::UnknownId,
                    s.line,
                    *col,
                    format!("no arrow named `{name}`"),
                ))
            }
        }
    }
    match PathWord::from_arrows(quiver, seq) {
        Ok(w) => Ok(AlgebraElement::monomial(quiver, w, coef)),
        Err(AlgebraError::NotComposable(pos)) => {
            let col = ids[pos + 1].0;
            Err(Diagnostic::new(
                DiagCode::NotComposable,
                s.line,
                col,
                format!(
                    "`{}` does not compose after `{}`",
                    ids[pos].1,
                    ids[pos + 1].1
                ),
            ))
        }
        Err(e) => Err(Diagnostic::new(
            DiagCode::BadElement,
            s.line,
            ids[0].0,
            e.to_string(),
        )),
    }
}

/// Emit the normalized text form of a model.
pub fn print(model: &QuiverModel) -> String {
    let q = model.quiver();
    let mut out = String::new();
    for (_, v) in q.vertices() {
        out.push_str("vertex ");
        out.push_str(&v.name);
        if v.frozen {
            out.push_str(" frozen");
        }
        out.push('\n');
    }
    for (_, a) in q.arrows() {
        out.push_str(&format!(
            "arrow {} : {} -> {}",
            a.name,
            q.vertex(a.source).name,
            q.vertex(a.target).name
        ));
        if a.degree != 0 {
            out.push_str(&format!(" deg {}", a.degree));
        }
        if a.frozen {
            out.push_str(" frozen");
        }
        out.push('\n');
    }
    match model {
        QuiverModel::Quiver(_) => {}
        QuiverModel::WithPotential(ice) => {
            out.push_str(&format!("potential = {}\n", ice.potential().element()));
        }
        QuiverModel::Presentation(p) => {
            for r in p.relations() {
                out.push_str(&format!("relation {r}\n"));
            }
        }
        QuiverModel::Dg(d) => {
            for (ix, a) in q.arrows() {
                let dx = d.d_of_arrow(ix);
                if !dx.is_zero() {
                    out.push_str(&format!("differential {} = {dx}\n", a.name));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completions::{ginzburg3, relative_preprojective2};
    use crate::scalar::qi;

    fn triangle_with_potential() -> &'static str {
        "vertex 1\nvertex 2\nvertex 3\n\
         arrow a : 2 -> 3\narrow b : 1 -> 2\narrow c : 3 -> 1\n\
         potential = a*b*c\n"
    }

    #[test]
    fn the_boxed_vertex_file_feeds_the_relative_completion() {
        let text = "# A3 with a frozen sink\n\
                    vertex 1\nvertex 2\nvertex 3 frozen\n\
                    arrow b : 1 -> 2\narrow a : 2 -> 3\n";
        let model = parse(text).unwrap();
        let q = match &model {
            QuiverModel::Quiver(q) => q,
            other => panic!("expected a plain quiver, got {}", other.kind()),
        };
        assert!(q.vertex(q.vertex_named("3").unwrap()).frozen);
        assert!(!q.vertex(q.vertex_named("1").unwrap()).frozen);
        relative_preprojective2(q).unwrap();
    }

    #[test]
    fn empty_input_reports_no_vertices() {
        for text in ["", "# just a comment\n\n"] {
            let d = parse(text).unwrap_err();
            assert_eq!(d.code, DiagCode::NoVertices);
            assert!(d.message.contains("no vertices"));
        }
    }

    #[test]
    fn non_cyclic_potentials_are_rejected_with_position() {
        // a*b composes (b then a gives 1 -> 3) but is not a closed cycle
        let text = "vertex 1\nvertex 2\nvertex 3\n\
                    arrow b : 1 -> 2\narrow a : 2 -> 3\n\
                    potential = a*b\n";
        let d = parse(text).unwrap_err();
        assert_eq!(d.code, DiagCode::NotCyclic);
        assert_eq!(d.line, 6);
        assert_eq!(d.col, 13);
    }

    #[test]
    fn unknown_and_noncomposable_words_get_distinct_codes() {
        let base = "vertex 1\nvertex 2\nvertex 3\n\
                    arrow b : 1 -> 2\narrow a : 2 -> 3\n";
        let unknown = parse(&format!("{base}relation a*z\n")).unwrap_err();
        assert_eq!(unknown.code, DiagCode::UnknownId);
        assert_eq!(unknown.line, 6);
        assert_eq!(unknown.col, 12);
        let swapped = parse(&format!("{base}relation b*a\n")).unwrap_err();
        assert_eq!(swapped.code, DiagCode::NotComposable);
        assert_eq!(swapped.col, 12);
    }

    #[test]
    fn frozen_arrows_need_frozen_endpoints() {
        let text = "vertex 1\nvertex 2 frozen\narrow a : 1 -> 2 frozen\n";
        let d = parse(text).unwrap_err();
        assert_eq!(d.code, DiagCode::FrozenEndpoints);
        assert_eq!(d.line, 3);
    }

    #[test]
    fn sections_do_not_mix_and_assignments_do_not_repeat() {
        let base = "vertex 1\narrow x : 1 -> 1\narrow y : 1 -> 1 deg -1\n";
        let mixed = parse(&format!("{base}relation x*x\ndifferential y = x*x\n")).unwrap_err();
        assert_eq!(mixed.code, DiagCode::MixedSections);
        let twice = parse(&format!(
            "{base}differential y = x*x\ndifferential y = x\n"
        ))
        .unwrap_err();
        assert_eq!(twice.code, DiagCode::DuplicateAssignment);
    }

    #[test]
    fn rational_coefficients_and_idempotents_parse() {
        // lazy idempotent terms are only admissible in differentials
        let text = "vertex 1\narrow x : 1 -> 1\narrow y : 1 -> 1 deg -1\n\
                    differential y = x*x - 3/2*x + e_1\n";
        let model = parse(text).unwrap();
        let d = match &model {
            QuiverModel::Dg(d) => d,
            other => panic!("expected a dg presentation, got {}", other.kind()),
        };
        let q = d.quiver();
        let expect = &(&crate::dg::element_from_named(q, &[(&["x", "x"], qi(1))]).unwrap()
            - &crate::dg::element_from_named(q, &[(&["x"], crate::scalar::qr(3, 2))]).unwrap())
            + &AlgebraElement::monomial(q, PathWord::Vertex(0), qi(1));
        assert_eq!(d.d_of_named("y").unwrap(), &expect);
    }

    #[test]
    fn printing_and_reparsing_is_the_identity_on_every_model_kind() {
        let dual = "vertex 1\narrow x : 1 -> 1\nrelation x*x\n";
        let plain = "vertex 1\nvertex 2 frozen\nvertex 3 frozen\n\
                     arrow a : 1 -> 2\narrow f : 2 -> 3 deg 2 frozen\n";
        let mut texts = vec![
            dual.to_string(),
            plain.to_string(),
            triangle_with_potential().to_string(),
        ];
        // a dg model with signs, multi-letter words and negative degrees
        let ice = match parse(triangle_with_potential()).unwrap() {
            QuiverModel::WithPotential(ice) => ice,
            _ => unreachable!(),
        };
        let g = ginzburg3(ice.quiver(), ice.potential()).unwrap();
        texts.push(print(&QuiverModel::Dg(g)));
        for text in texts {
            let once = print(&parse(&text).unwrap());
            let twice = print(&parse(&once).unwrap());
            assert_eq!(once, twice, "normal form must be stable for:\n{text}");
        }
    }
}
