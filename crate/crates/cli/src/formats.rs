//! Text file formats: module presentations (generators and relations) and
//! explicit action matrices. Both are line-based UTF-8 with `#` comments,
//! hand-writable, and round-trip through their serializers.

use std::collections::BTreeMap;
use std::str::FromStr;

use fimod_core::module::{DegreeBounds, ExtendedDegree, FreeModuleSpec, FreeRealization};
use fimod_core::scalar::{parse_scalar, Scalar};
use fimod_core::{FieldSpec, Injection, Matrix, TruncatedFIModule};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Semantic(String),
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// Parses a field designator: `Q`, `F<p>`, or `Fp:<p>`.
pub fn parse_field(text: &str) -> Result<FieldSpec, String> {
    let t = text.trim();
    if t == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t.strip_prefix("Fp:").or_else(|| t.strip_prefix('F'));
    if let Some(d) = digits {
        let p: u32 = d.parse().map_err(|_| format!("bad field `{t}`"))?;
        let f = FieldSpec::PrimeField(p);
        f.validate()?;
        return Ok(f);
    }
    Err(format!("bad field `{t}`, expected Q or Fp:<p>"))
}

pub fn field_text(field: FieldSpec) -> String {
    match field {
        FieldSpec::Rationals => "Q".into(),
        FieldSpec::PrimeField(p) => format!("Fp:{p}"),
    }
}

/// One summand of a relation: `coefficient * injection @ generator`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationTerm {
    pub coefficient: Scalar,
    pub injection: Injection,
    pub generator: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub name: String,
    pub terms: Vec<RelationTerm>,
}

/// A module presentation: named generators with degrees, and relations as
/// formal combinations of (injection, generator) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PresentationFile {
    pub field: FieldSpec,
    pub window: usize,
    pub generators: Vec<(String, usize)>,
    pub relations: Vec<Relation>,
}

impl PresentationFile {
    pub fn max_generator_degree(&self) -> ExtendedDegree {
        self.generators
            .iter()
            .map(|(_, d)| *d)
            .max()
            .map_or(ExtendedDegree::NegInfinity, ExtendedDegree::Finite)
    }

    pub fn max_relation_degree(&self) -> ExtendedDegree {
        self.relations
            .iter()
            .filter_map(|r| r.terms.first().map(|t| t.injection.target()))
            .max()
            .map_or(ExtendedDegree::NegInfinity, ExtendedDegree::Finite)
    }
}

pub fn parse_presentation(text: &str) -> Result<PresentationFile, FormatError> {
    let mut field: Option<FieldSpec> = None;
    let mut window: Option<usize> = None;
    let mut generators: Vec<(String, usize)> = Vec::new();
    let mut gen_index: BTreeMap<String, usize> = BTreeMap::new();
    let mut relations: Vec<Relation> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "field" => {
                field = Some(parse_field(rest).map_err(|m| err(lineno, m))?);
            }
            "window" => {
                window =
                    Some(rest.parse().map_err(|_| err(lineno, format!("bad window `{rest}`")))?);
            }
            "generator" => {
                let mut parts = rest.split_whitespace();
                let name = parts
                    .next()
                    .ok_or_else(|| err(lineno, "generator needs a name and a degree"))?;
                let degree: usize = parts
                    .next()
                    .ok_or_else(|| err(lineno, "generator needs a degree"))?
                    .parse()
                    .map_err(|_| err(lineno, "bad generator degree"))?;
                if parts.next().is_some() {
                    return Err(err(lineno, "trailing tokens after generator degree"));
                }
                if gen_index.contains_key(name) {
                    return Err(err(lineno, format!("duplicate generator `{name}`")));
                }
                let w = window.ok_or_else(|| err(lineno, "window must come before generators"))?;
                if degree > w {
                    return Err(err(lineno, format!("generator degree {degree} above window {w}")));
                }
                gen_index.insert(name.to_string(), generators.len());
                generators.push((name.to_string(), degree));
            }
            "relation" => {
                let f = field.ok_or_else(|| err(lineno, "field must come before relations"))?;
                let w = window.ok_or_else(|| err(lineno, "window must come before relations"))?;
                let (name, body) = rest
                    .split_once('=')
                    .ok_or_else(|| err(lineno, "relation needs `name = terms`"))?;
                let name = name.trim();
                if name.is_empty() {
                    return Err(err(lineno, "relation needs a name"));
                }
                let terms = parse_terms(body, f, lineno, &gen_index, &generators)?;
                if terms.is_empty() {
                    return Err(err(lineno, "relation needs at least one term"));
                }
                let degree = terms[0].injection.target();
                if degree > w {
                    return Err(err(lineno, format!("relation degree {degree} above window {w}")));
                }
                for t in &terms {
                    if t.injection.target() != degree {
                        return Err(err(
                            lineno,
                            "all terms of a relation must share one target degree",
                        ));
                    }
                }
                relations.push(Relation { name: name.to_string(), terms });
            }
            other => return Err(err(lineno, format!("unknown keyword `{other}`"))),
        }
    }
    let field = field.ok_or_else(|| err(0, "missing `field` line"))?;
    let window = window.ok_or_else(|| err(0, "missing `window` line"))?;
    Ok(PresentationFile { field, window, generators, relations })
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

/// Splits `c1 * inj @ g1 + c2 * inj @ g2 - ...` into signed terms.
fn parse_terms(
    body: &str,
    field: FieldSpec,
    lineno: usize,
    gen_index: &BTreeMap<String, usize>,
    generators: &[(String, usize)],
) -> Result<Vec<RelationTerm>, FormatError> {
    // Tokenize on whitespace; `+`/`-` separate terms.
    let mut chunks: Vec<(bool, Vec<&str>)> = vec![(false, Vec::new())];
    for token in body.split_whitespace() {
        match token {
            "+" => chunks.push((false, Vec::new())),
            "-" => chunks.push((true, Vec::new())),
            t => chunks.last_mut().unwrap().1.push(t),
        }
    }
    let mut terms = Vec::new();
    for (negate, tokens) in chunks {
        if tokens.is_empty() {
            if terms.is_empty() && !negate {
                continue; // leading emptiness before the first term
            }
            return Err(err(lineno, "empty relation term"));
        }
        // Forms: [coeff *] injection @ generator
        let joined = tokens.join(" ");
        let (coeff_text, rest) = match joined.split_once('*') {
            Some((c, r)) => (Some(c.trim().to_string()), r.trim().to_string()),
            None => (None, joined),
        };
        let (inj_text, gen_name) = rest
            .split_once('@')
            .ok_or_else(|| err(lineno, "term needs `injection @ generator`"))?;
        let injection = Injection::from_str(inj_text.trim()).map_err(|m| err(lineno, m))?;
        let gen_name = gen_name.trim();
        let &gidx = gen_index
            .get(gen_name)
            .ok_or_else(|| err(lineno, format!("unknown generator `{gen_name}`")))?;
        let gen_degree = generators[gidx].1;
        if injection.source() != gen_degree {
            return Err(err(
                lineno,
                format!(
                    "injection source {} does not match degree {} of generator `{gen_name}`",
                    injection.source(),
                    gen_degree
                ),
            ));
        }
        let mut coefficient = match coeff_text {
            Some(c) => parse_scalar(field, &c).map_err(|m| err(lineno, m))?,
            None => field.one(),
        };
        if negate {
            coefficient = -&coefficient;
        }
        if coefficient.is_zero() {
            return Err(err(lineno, "zero coefficient in relation term"));
        }
        terms.push(RelationTerm { coefficient, injection, generator: gen_name.to_string() });
    }
    Ok(terms)
}

pub fn serialize_presentation(pf: &PresentationFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", field_text(pf.field)));
    out.push_str(&format!("window {}\n", pf.window));
    for (name, degree) in &pf.generators {
        out.push_str(&format!("generator {name} {degree}\n"));
    }
    for r in &pf.relations {
        out.push_str(&format!("relation {} =", r.name));
        for (k, t) in r.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" +");
            }
            out.push_str(&format!(" {} * {} @ {}", t.coefficient, t.injection, t.generator));
        }
        out.push('\n');
    }
    out
}

/// Builds the presented module: the free module on the generators modulo
/// the submodule generated by the relation vectors. The result carries the
/// presentation's degree bounds for downstream certification.
pub fn materialize(pf: &PresentationFile) -> Result<TruncatedFIModule, FormatError> {
    pf.field
        .validate()
        .map_err(FormatError::Semantic)?;
    let spec = FreeModuleSpec { generators: pf.generators.iter().map(|(_, d)| *d).collect() };
    let free = FreeRealization::new(spec, pf.field, pf.window)
        .map_err(|e| FormatError::Semantic(e.to_string()))?;
    let gen_index: BTreeMap<&str, usize> = pf
        .generators
        .iter()
        .enumerate()
        .map(|(i, (name, _))| (name.as_str(), i))
        .collect();
    let mut seeds = Vec::new();
    for r in &pf.relations {
        let degree = r.terms[0].injection.target();
        let mut v = vec![pf.field.zero(); free.dim(degree)];
        for t in &r.terms {
            let g = gen_index[t.generator.as_str()];
            let idx = free.index_of(degree, g, &t.injection);
            v[idx] = &v[idx] + &t.coefficient;
        }
        seeds.push((degree, v));
    }
    let relation_submodule = free.submodule_generated_by(&seeds);
    let (mut module, _) = free
        .to_module()
        .quotient(&relation_submodule)
        .map_err(|e| FormatError::Semantic(e.to_string()))?;
    module.set_bounds(Some(DegreeBounds {
        generators: pf.max_generator_degree(),
        relations: pf.max_relation_degree(),
    }));
    Ok(module)
}

/// Parses an explicit-matrix module file and validates the functor
/// relations.
pub fn parse_explicit(text: &str) -> Result<TruncatedFIModule, FormatError> {
    let mut field: Option<FieldSpec> = None;
    let mut window: Option<usize> = None;
    let mut dims: Option<Vec<usize>> = None;
    // Collect matrix blocks keyed by their header.
    enum Block {
        Incl(usize),
        Sym(usize, usize),
    }
    let mut blocks: Vec<(usize, Block, Vec<Vec<Scalar>>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "field" => field = Some(parse_field(rest).map_err(|m| err(lineno, m))?),
            "window" => {
                window =
                    Some(rest.parse().map_err(|_| err(lineno, format!("bad window `{rest}`")))?)
            }
            "dims" => {
                let parsed: Result<Vec<usize>, _> =
                    rest.split_whitespace().map(|t| t.parse()).collect();
                let d = parsed.map_err(|_| err(lineno, "bad dimension list"))?;
                let w = window.ok_or_else(|| err(lineno, "window must come before dims"))?;
                if d.len() != w + 1 {
                    return Err(err(lineno, format!("expected {} dims, got {}", w + 1, d.len())));
                }
                dims = Some(d);
            }
            "incl" => {
                let n: usize = rest.parse().map_err(|_| err(lineno, "bad inclusion degree"))?;
                blocks.push((lineno, Block::Incl(n), Vec::new()));
            }
            "sym" => {
                let mut parts = rest.split_whitespace();
                let n: usize = parts
                    .next()
                    .ok_or_else(|| err(lineno, "sym needs a degree and an index"))?
                    .parse()
                    .map_err(|_| err(lineno, "bad sym degree"))?;
                let i: usize = parts
                    .next()
                    .ok_or_else(|| err(lineno, "sym needs an index"))?
                    .parse()
                    .map_err(|_| err(lineno, "bad sym index"))?;
                blocks.push((lineno, Block::Sym(n, i), Vec::new()));
            }
            _ => {
                // A matrix row belonging to the current block.
                let f = field.ok_or_else(|| err(lineno, "field must come before matrix rows"))?;
                let row: Result<Vec<Scalar>, String> =
                    line.split_whitespace().map(|t| parse_scalar(f, t)).collect();
                let row = row.map_err(|m| err(lineno, m))?;
                let block = blocks
                    .last_mut()
                    .ok_or_else(|| err(lineno, "matrix row outside any block"))?;
                block.2.push(row);
            }
        }
    }
    let field = field.ok_or_else(|| err(0, "missing `field` line"))?;
    let window = window.ok_or_else(|| err(0, "missing `window` line"))?;
    let dims = dims.ok_or_else(|| err(0, "missing `dims` line"))?;
    let mut incl: Vec<Option<Matrix>> = vec![None; window];
    let mut sym: Vec<Vec<Option<Matrix>>> =
        (0..=window).map(|n| vec![None; n.saturating_sub(1)]).collect();
    for (lineno, block, rows) in blocks {
        let (expect_rows, expect_cols, slot): (usize, usize, &mut Option<Matrix>) = match block {
            Block::Incl(n) => {
                if n >= window {
                    return Err(err(lineno, format!("inclusion degree {n} out of range")));
                }
                (dims[n + 1], dims[n], &mut incl[n])
            }
            Block::Sym(n, i) => {
                if n > window || i == 0 || i >= n.max(1) {
                    return Err(err(lineno, format!("sym {n} {i} out of range")));
                }
                (dims[n], dims[n], &mut sym[n][i - 1])
            }
        };
        if slot.is_some() {
            return Err(err(lineno, "duplicate matrix block"));
        }
        if expect_rows == 0 || expect_cols == 0 {
            if !rows.is_empty() {
                return Err(err(lineno, "rows given for an empty matrix"));
            }
            *slot = Some(Matrix::zero(field, expect_rows, expect_cols));
            continue;
        }
        if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
            return Err(err(
                lineno,
                format!("matrix must be {expect_rows} rows of {expect_cols} entries"),
            ));
        }
        *slot = Some(Matrix::from_rows(field, expect_cols, rows));
    }
    let incl: Vec<Matrix> = incl
        .into_iter()
        .enumerate()
        .map(|(n, m)| m.ok_or_else(|| err(0, format!("missing `incl {n}` block"))))
        .collect::<Result<_, _>>()?;
    let sym: Vec<Vec<Matrix>> = sym
        .into_iter()
        .enumerate()
        .map(|(n, fam)| {
            fam.into_iter()
                .enumerate()
                .map(|(i, m)| m.ok_or_else(|| err(0, format!("missing `sym {n} {}` block", i + 1))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let module =
        TruncatedFIModule::new(field, dims, incl, sym).map_err(FormatError::Semantic)?;
    Ok(module)
}

pub fn serialize_explicit(v: &TruncatedFIModule) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", field_text(v.field())));
    out.push_str(&format!("window {}\n", v.window()));
    let dims: Vec<String> = v.dims().iter().map(|d| d.to_string()).collect();
    out.push_str(&format!("dims {}\n", dims.join(" ")));
    let emit = |out: &mut String, m: &Matrix| {
        if m.rows() == 0 || m.cols() == 0 {
            return;
        }
        for r in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    };
    for n in 0..v.window() {
        out.push_str(&format!("incl {n}\n"));
        emit(&mut out, v.incl_matrix(n));
    }
    for n in 0..=v.window() {
        for i in 1..n {
            out.push_str(&format!("sym {n} {i}\n"));
            emit(&mut out, v.sym_matrix(n, i));
        }
    }
    out
}

/// Loads either format, detecting explicit files by their `dims` line.
pub fn load_module(text: &str) -> Result<(TruncatedFIModule, &'static str), FormatError> {
    let is_explicit = text
        .lines()
        .map(strip_comment)
        .any(|l| l == "dims" || l.starts_with("dims "));
    if is_explicit {
        let module = parse_explicit(text)?;
        let report = module.validate();
        if !report.is_valid() {
            let first = &report.violations[0];
            return Err(FormatError::Semantic(format!(
                "module relations fail validation at degree {}: {}",
                first.degree, first.relation
            )));
        }
        Ok((module, "explicit"))
    } else {
        Ok((materialize(&parse_presentation(text)?)?, "presentation"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const POINT: &str = "\
# the module k in degree 0
field Q
window 6
generator g 0
relation r = 0->1:() @ g
";

    #[test]
    fn materializes_simple_presentations() {
        // One degree-0 generator, no relations: the constant module.
        let m0 = materialize(
            &parse_presentation("field Q\nwindow 4\ngenerator g 0\n").unwrap(),
        )
        .unwrap();
        assert_eq!(m0.dims(), &[1, 1, 1, 1, 1]);
        // Killing its degree-1 image leaves the point module.
        let pt = materialize(&parse_presentation(POINT).unwrap()).unwrap();
        assert_eq!(pt.dims(), &[1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(pt, fimod_core::TruncatedFIModule::point_at_zero(FieldSpec::Rationals, 6));
        // A redundant generator collapses.
        let redundant = "field Q\nwindow 4\ngenerator a 1\ngenerator b 1\n\
             relation r = 1->1:(1) @ a - 1->1:(1) @ b\n";
        let m = materialize(&parse_presentation(redundant).unwrap()).unwrap();
        assert_eq!(m.dims(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "field Q\nwindow 4\ngenerator g 0\nrelation r = 1->2:(5) @ g\n";
        match parse_presentation(bad) {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected a parse error, got {other:?}"),
        }
        let mismatch = "field Q\nwindow 4\ngenerator g 1\nrelation r = 0->1:() @ g\n";
        assert!(matches!(parse_presentation(mismatch), Err(FormatError::Parse { line: 4, .. })));
        let above = "field Q\nwindow 3\ngenerator g 4\n";
        assert!(matches!(parse_presentation(above), Err(FormatError::Parse { line: 3, .. })));
    }

    #[test]
    fn presentation_round_trip() {
        let text = "field Fp:3\nwindow 5\ngenerator a 0\ngenerator b 2\n\
             relation r0 = 2 * 2->2:(2,1) @ b + 0->2:() @ a\n";
        let pf = parse_presentation(text).unwrap();
        let again = parse_presentation(&serialize_presentation(&pf)).unwrap();
        assert_eq!(pf, again);
        assert_eq!(materialize(&pf).unwrap(), materialize(&again).unwrap());
    }

    #[test]
    fn explicit_round_trip() {
        let m = materialize(&parse_presentation(POINT).unwrap()).unwrap();
        let text = serialize_explicit(&m);
        let back = parse_explicit(&text).unwrap();
        assert_eq!(m, back);
        // And through the autodetecting loader.
        let (loaded, kind) = load_module(&text).unwrap();
        assert_eq!(kind, "explicit");
        assert_eq!(loaded, m);
    }

    #[test]
    fn explicit_loader_validates() {
        // dims (1,1,1), identity inclusions, s_1 = -1: passes the shape
        // checks but violates the two-step relation.
        let bad = "field Q\nwindow 2\ndims 1 1 1\nincl 0\n1\nincl 1\n1\nsym 2 1\n-1\n";
        match load_module(bad) {
            Err(FormatError::Semantic(m)) => assert!(m.contains("two-step"), "{m}"),
            other => panic!("expected a validation failure, got {other:?}"),
        }
    }

    #[test]
    fn field_designators() {
        assert_eq!(parse_field("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(parse_field("F2").unwrap(), FieldSpec::PrimeField(2));
        assert_eq!(parse_field("Fp:5").unwrap(), FieldSpec::PrimeField(5));
        assert!(parse_field("F4").is_err());
        assert!(parse_field("R").is_err());
    }
}
