//! The declarative structure-description format (TOML with trig-poly strings).
//!
//! ```toml
//! name = "leafwise_conformal_t4"
//! kind = "foliation"              # foliation | distribution | bihermitian
//! validate = true                 # foliation only; false skips integrability checks
//! f_frame = [["1", "0", "0", "0"], ["0", "1", "0", "0"]]
//! n_frame = [["0", "0", "1", "0"], ["0", "0", "0", "1"]]
//! transverse_j = [["0", "-1"], ["1", "0"]]
//! metric = [["1 + 0.1*cos(t1 + t3)", "0", "0", "0"], …]
//! b = [{ idx = [1, 3], coef = "0.3" }]
//! h = "twist"                   # or a list of terms like b
//! ```
//!
//! Frames list vectors by their components; matrices list rows. Form terms
//! use 1-based increasing indices. Distributions take `e_frame`, `n_frame`
//! and `metric`; bihermitian data takes `metric`, `j_plus`, `j_minus` and an
//! optional `frame`.

use serde::{Deserialize, Serialize};
use toml::Spanned;

use super::expr::parse_expression;
use crate::catalog::{Construction, Description, Twist};
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::tensor::{DifferentialForm, EndomorphismField, FieldMatrix, Form, VectorField};

const DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Foliation,
    Distribution,
    Bihermitian,
}

type Grid = Spanned<Vec<Vec<Spanned<String>>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileIn {
    name: Option<String>,
    kind: Kind,
    validate: Option<bool>,
    metric: Option<Grid>,
    f_frame: Option<Grid>,
    n_frame: Option<Grid>,
    e_frame: Option<Grid>,
    transverse_j: Option<Grid>,
    j_plus: Option<Grid>,
    j_minus: Option<Grid>,
    frame: Option<Grid>,
    #[serde(default)]
    b: Vec<Spanned<TermIn>>,
    h: Option<TwistIn>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermIn {
    idx: Vec<usize>,
    coef: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TwistIn {
    Builder(String),
    Terms(Vec<Spanned<TermIn>>),
}

#[derive(Serialize)]
struct FileOut {
    name: String,
    kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    validate: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f_frame: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    e_frame: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_frame: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transverse_j: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j_plus: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j_minus: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frame: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric: Option<Vec<Vec<String>>>,
    b: Vec<TermOut>,
    h: TwistOut,
}

#[derive(Serialize)]
struct TermOut {
    idx: Vec<usize>,
    coef: String,
}

#[derive(Serialize)]
#[serde(untagged)]
enum TwistOut {
    Builder(&'static str),
    Terms(Vec<TermOut>),
}

/// Byte offset → 1-based (line, column).
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> Error {
        let (line, column) = line_col(self.text, offset);
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn scalar(&self, s: &Spanned<String>) -> Result<ScalarField> {
        // the span covers the quotes of a basic string
        let start = s.span().start + 1;
        parse_expression(s.get_ref(), DIM).map_err(|e| self.error_at(start + e.offset, e.message))
    }

    fn grid(
        &self,
        g: &Grid,
        rows: usize,
        cols: usize,
        what: &str,
    ) -> Result<Vec<Vec<ScalarField>>> {
        let at = g.span().start;
        if g.get_ref().len() != rows {
            return Err(self.error_at(
                at,
                format!("{what} needs {rows} rows, found {}", g.get_ref().len()),
            ));
        }
        g.get_ref()
            .iter()
            .map(|row| {
                if row.len() != cols {
                    return Err(self.error_at(
                        at,
                        format!("{what} rows need {cols} entries, found {}", row.len()),
                    ));
                }
                row.iter().map(|s| self.scalar(s)).collect()
            })
            .collect()
    }

    fn matrix(&self, g: &Grid, n: usize, what: &str) -> Result<FieldMatrix> {
        let rows = self.grid(g, n, n, what)?;
        FieldMatrix::new(n, n, rows.into_iter().flatten().collect())
    }

    fn vectors(&self, g: &Grid, count: Option<usize>, what: &str) -> Result<Vec<VectorField>> {
        let n = g.get_ref().len();
        if n == 0 || count.is_some_and(|c| c != n) {
            let want = count.map_or("at least one".to_string(), |c| c.to_string());
            return Err(self.error_at(
                g.span().start,
                format!("{what} needs {want} vectors, found {n}"),
            ));
        }
        self.grid(g, n, DIM, what)?
            .into_iter()
            .map(VectorField::new)
            .collect()
    }

    fn pair(&self, g: &Option<Grid>, what: &str) -> Result<[VectorField; 2]> {
        let g = g.as_ref().ok_or_else(|| self.missing(what))?;
        let v = self.vectors(g, Some(2), what)?;
        Ok([v[0].clone(), v[1].clone()])
    }

    fn missing(&self, what: &str) -> Error {
        Error::Config(format!("description is missing `{what}`"))
    }

    fn form(
        &self,
        terms: &[Spanned<TermIn>],
        degree: usize,
        what: &str,
    ) -> Result<DifferentialForm> {
        let mut acc = Form::zero(DIM, degree);
        for t in terms {
            let at = t.span().start;
            let term = t.get_ref();
            let ok = term.idx.len() == degree
                && term.idx.windows(2).all(|w| w[0] < w[1])
                && term.idx.iter().all(|&i| (1..=DIM).contains(&i));
            if !ok {
                return Err(self.error_at(
                    at,
                    format!("{what} terms need {degree} increasing indices in 1..={DIM}"),
                ));
            }
            let idx: Vec<usize> = term.idx.iter().map(|i| i - 1).collect();
            let coef = self.scalar(&term.coef)?;
            acc = acc.add(&Form::from_components(DIM, degree, [(idx, coef)])?);
        }
        Ok(acc)
    }
}

/// Parses a description file. Returns the optional name and the description.
pub fn parse_structure(text: &str) -> Result<(Option<String>, Description)> {
    let file: FileIn = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let cx = Ctx { text };
    let construction = match file.kind {
        Kind::Foliation => {
            let f = cx.pair(&file.f_frame, "f_frame")?;
            let n = cx.pair(&file.n_frame, "n_frame")?;
            let j = file
                .transverse_j
                .as_ref()
                .ok_or_else(|| cx.missing("transverse_j"))?;
            let j = cx.matrix(j, 2, "transverse_j")?;
            let metric = file
                .metric
                .as_ref()
                .map(|g| cx.matrix(g, DIM, "metric"))
                .transpose()?;
            Construction::Foliation {
                f,
                n,
                j,
                metric,
                validate: file.validate.unwrap_or(true),
            }
        }
        Kind::Distribution => Construction::Distribution {
            metric: cx.matrix(
                file.metric.as_ref().ok_or_else(|| cx.missing("metric"))?,
                DIM,
                "metric",
            )?,
            e: cx.pair(&file.e_frame, "e_frame")?,
            n: cx.pair(&file.n_frame, "n_frame")?,
        },
        Kind::Bihermitian => Construction::Bihermitian {
            metric: cx.matrix(
                file.metric.as_ref().ok_or_else(|| cx.missing("metric"))?,
                DIM,
                "metric",
            )?,
            j_plus: cx.matrix(
                file.j_plus.as_ref().ok_or_else(|| cx.missing("j_plus"))?,
                DIM,
                "j_plus",
            )?,
            j_minus: cx.matrix(
                file.j_minus.as_ref().ok_or_else(|| cx.missing("j_minus"))?,
                DIM,
                "j_minus",
            )?,
            frame: file
                .frame
                .as_ref()
                .map(|g| cx.vectors(g, None, "frame"))
                .transpose()?,
        },
    };
    if file.kind != Kind::Foliation && file.validate.is_some() {
        return Err(Error::Config(
            "`validate` applies to foliation descriptions only".into(),
        ));
    }
    let b = cx.form(&file.b, 2, "b")?;
    let h = match &file.h {
        None => Twist::Form(Form::zero(DIM, 3)),
        Some(TwistIn::Builder(s)) if s == "twist" => Twist::FromFoliation,
        Some(TwistIn::Builder(s)) => {
            return Err(Error::Config(format!("unknown twist builder `{s}`")))
        }
        Some(TwistIn::Terms(t)) => Twist::Form(cx.form(t, 3, "h")?),
    };
    Ok((file.name, Description { construction, b, h }))
}

fn grid_out(rows: impl IntoIterator<Item = Vec<ScalarField>>) -> Vec<Vec<String>> {
    rows.into_iter()
        .map(|r| r.iter().map(|f| f.to_string()).collect())
        .collect()
}

fn matrix_out(m: &FieldMatrix) -> Vec<Vec<String>> {
    grid_out((0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).clone()).collect()))
}

fn vectors_out(vs: &[VectorField]) -> Vec<Vec<String>> {
    grid_out(vs.iter().map(|v| v.components().to_vec()))
}

fn terms_out(form: &DifferentialForm) -> Vec<TermOut> {
    form.components()
        .filter(|(_, c)| !c.is_zero())
        .map(|(idx, c)| TermOut {
            idx: idx.iter().map(|i| i + 1).collect(),
            coef: c.to_string(),
        })
        .collect()
}

/// Renders a description in the file format; `parse_structure` inverts it.
pub fn to_toml(name: &str, desc: &Description) -> Result<String> {
    let mut out = FileOut {
        name: name.to_string(),
        kind: Kind::Bihermitian,
        validate: None,
        f_frame: None,
        e_frame: None,
        n_frame: None,
        transverse_j: None,
        j_plus: None,
        j_minus: None,
        frame: None,
        metric: None,
        b: terms_out(&desc.b),
        h: match &desc.h {
            Twist::FromFoliation => TwistOut::Builder("twist"),
            Twist::Form(h) => TwistOut::Terms(terms_out(h)),
        },
    };
    match &desc.construction {
        Construction::Bihermitian {
            metric,
            j_plus,
            j_minus,
            frame,
        } => {
            out.metric = Some(matrix_out(metric));
            out.j_plus = Some(matrix_out(j_plus));
            out.j_minus = Some(matrix_out(j_minus));
            out.frame = frame.as_ref().map(|f| vectors_out(f));
        }
        Construction::Distribution { metric, e, n } => {
            out.kind = Kind::Distribution;
            out.metric = Some(matrix_out(metric));
            out.e_frame = Some(vectors_out(e));
            out.n_frame = Some(vectors_out(n));
        }
        Construction::Foliation {
            f,
            n,
            j,
            metric,
            validate,
        } => {
            out.kind = Kind::Foliation;
            out.validate = Some(*validate);
            out.f_frame = Some(vectors_out(f));
            out.n_frame = Some(vectors_out(n));
            out.transverse_j = Some(matrix_out(j));
            out.metric = metric.as_ref().map(matrix_out);
        }
    }
    toml::to_string(&out).map_err(|e| Error::Config(format!("cannot serialise description: {e}")))
}

/// Convenience used by tests: the `EndomorphismField` entries of a construction
/// compared for exact equality after a text round trip.
pub fn same_construction(a: &Construction, b: &Construction) -> bool {
    fn mat(a: &EndomorphismField, b: &EndomorphismField) -> bool {
        a.sub(b).is_zero()
    }
    fn vecs(a: &[VectorField], b: &[VectorField]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.sub(y).is_zero())
    }
    match (a, b) {
        (
            Construction::Bihermitian {
                metric: g1,
                j_plus: p1,
                j_minus: m1,
                frame: f1,
            },
            Construction::Bihermitian {
                metric: g2,
                j_plus: p2,
                j_minus: m2,
                frame: f2,
            },
        ) => {
            mat(g1, g2)
                && mat(p1, p2)
                && mat(m1, m2)
                && match (f1, f2) {
                    (None, None) => true,
                    (Some(x), Some(y)) => vecs(x, y),
                    _ => false,
                }
        }
        (
            Construction::Distribution {
                metric: g1,
                e: e1,
                n: n1,
            },
            Construction::Distribution {
                metric: g2,
                e: e2,
                n: n2,
            },
        ) => mat(g1, g2) && vecs(e1, e2) && vecs(n1, n2),
        (
            Construction::Foliation {
                f: f1,
                n: n1,
                j: j1,
                metric: g1,
                validate: v1,
            },
            Construction::Foliation {
                f: f2,
                n: n2,
                j: j2,
                metric: g2,
                validate: v2,
            },
        ) => {
            v1 == v2
                && vecs(f1, f2)
                && vecs(n1, n2)
                && mat(j1, j2)
                && match (g1, g2) {
                    (None, None) => true,
                    (Some(x), Some(y)) => mat(x, y),
                    _ => false,
                }
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_entries_round_trip() {
        for e in catalog::all() {
            let text = to_toml(&e.name, &e.description).unwrap();
            let (name, back) = parse_structure(&text).unwrap();
            assert_eq!(name.as_deref(), Some(e.name.as_str()));
            assert!(
                same_construction(&e.description.construction, &back.construction),
                "{}",
                e.name
            );
            assert!(back.b.sub(&e.description.b).is_zero());
            match (&e.description.h, &back.h) {
                (Twist::FromFoliation, Twist::FromFoliation) => {}
                (Twist::Form(x), Twist::Form(y)) => assert!(x.sub(y).is_zero()),
                _ => panic!("twist changed for {}", e.name),
            }
        }
    }

    #[test]
    fn empty_f_frame_is_rejected() {
        let text = r#"
kind = "foliation"
f_frame = []
n_frame = [["0","0","1","0"],["0","0","0","1"]]
transverse_j = [["0","-1"],["1","0"]]
"#;
        match parse_structure(text) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("f_frame"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn expression_errors_carry_file_positions() {
        let text = "kind = \"bihermitian\"\nmetric = [[\"1\",\"0\",\"0\",\"0\"],[\"0\",\"1\",\"0\",\"0\"],[\"0\",\"0\",\"1 + t2\",\"0\"],[\"0\",\"0\",\"0\",\"1\"]]\n";
        match parse_structure(text) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                let row = text.lines().nth(1).unwrap();
                assert_eq!(&row[column - 1..column + 1], "t2");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_structure("kind = \"bihermitian\"\nmetric = ["),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_structure("kind = \"moebius\""),
            Err(Error::Parse { .. })
        ));
    }
}
