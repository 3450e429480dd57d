//! The `hcd` instance document format.
//!
//! Line-oriented, UTF-8, `#` starts a comment, tokens are whitespace
//! separated:
//!
//! ```text
//! hcd 1
//! blocks <n>               # optional: arc partition with n blocks
//! colour <id>              # one per pattern vertex
//! hedge <c1> <c2>          # one per pattern arc, loops allowed
//! vertex <id>              # one per host vertex
//! arc <u> <v> <colour> [block=<k>]
//! ```
//!
//! Identifiers must be declared before use. Block labels are 1-based; a
//! partition is present when a `blocks` line or any label appears, and then
//! every arc must carry a label. The `blocks` line keeps partitions with
//! empty trailing blocks representable. [`serialize_instance`] emits the
//! canonical form: fixed section order, entries sorted lexicographically,
//! byte-deterministic.

use std::collections::BTreeMap;
use std::fmt;

use crate::digraph::{Arc, ColourId, HostDigraph, PatternDigraph, VertexId};
use crate::instance::{ArcPartition, ArcSet, ColouredInstance, Colouring};

/// Parse failure with a 1-based source location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

type ParseResult<T> = std::result::Result<T, ParseError>;

fn expect_fields<'a>(
    number: usize,
    toks: &[(usize, &'a str)],
    count: usize,
) -> ParseResult<(usize, Vec<&'a str>)> {
    if toks.len() != count {
        return Err(ParseError::new(
            number,
            toks[0].0,
            format!(
                "expected {} fields after '{}', got {}",
                count - 1,
                toks[0].1,
                toks.len() - 1
            ),
        ));
    }
    Ok((toks[0].0, toks[1..].iter().map(|&(_, t)| t).collect()))
}

/// Tokens of one line with their 1-based starting columns, comments
/// stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let mut out = Vec::new();
    let mut chars = content.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut end = start;
        while let Some(&(pos, c)) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            end = pos + c.len_utf8();
            chars.next();
        }
        out.push((start + 1, &content[start..end]));
    }
    out
}

struct Parser {
    colours: BTreeMap<ColourId, usize>,
    pattern_arcs: BTreeMap<(ColourId, ColourId), usize>,
    vertices: BTreeMap<VertexId, usize>,
    arcs: BTreeMap<Arc, usize>,
    colouring: Vec<(Arc, ColourId)>,
    blocks: Vec<(Arc, Option<usize>, usize)>,
    declared_blocks: Option<usize>,
    saw_header: bool,
}

impl Parser {
    fn new() -> Self {
        Parser {
            colours: BTreeMap::new(),
            pattern_arcs: BTreeMap::new(),
            vertices: BTreeMap::new(),
            arcs: BTreeMap::new(),
            colouring: Vec::new(),
            blocks: Vec::new(),
            declared_blocks: None,
            saw_header: false,
        }
    }

    fn line(&mut self, number: usize, toks: &[(usize, &str)]) -> ParseResult<()> {
        if !self.saw_header {
            if toks.len() != 2 || toks[0].1 != "hcd" || toks[1].1 != "1" {
                return Err(ParseError::new(
                    number,
                    toks[0].0,
                    "expected header 'hcd 1'",
                ));
            }
            self.saw_header = true;
            return Ok(());
        }
        let (col, directive) = toks[0];
        match directive {
            "blocks" => {
                let (_, fields) = expect_fields(number, toks, 2)?;
                let count = fields[0].parse::<usize>().ok().filter(|&n| n >= 1);
                let Some(count) = count else {
                    return Err(ParseError::new(
                        number,
                        toks[1].0,
                        format!("invalid block count '{}', expected an integer >= 1", fields[0]),
                    ));
                };
                if self.declared_blocks.replace(count).is_some() {
                    return Err(ParseError::new(
                        number,
                        col,
                        "duplicate 'blocks' declaration",
                    ));
                }
            }
            "colour" => {
                let (_, id) = expect_fields(number, toks, 2)?;
                let id = ColourId::new(id[0]);
                if self.colours.insert(id.clone(), number).is_some() {
                    return Err(ParseError::new(
                        number,
                        toks[1].0,
                        format!("duplicate colour '{id}'"),
                    ));
                }
            }
            "hedge" => {
                let (_, ids) = expect_fields(number, toks, 3)?;
                let from = self.known_colour(number, toks[1].0, ids[0])?;
                let to = self.known_colour(number, toks[2].0, ids[1])?;
                if self
                    .pattern_arcs
                    .insert((from.clone(), to.clone()), number)
                    .is_some()
                {
                    return Err(ParseError::new(
                        number,
                        toks[1].0,
                        format!("duplicate pattern arc '{from} -> {to}'"),
                    ));
                }
            }
            "vertex" => {
                let (_, id) = expect_fields(number, toks, 2)?;
                let id = VertexId::new(id[0]);
                if self.vertices.insert(id.clone(), number).is_some() {
                    return Err(ParseError::new(
                        number,
                        toks[1].0,
                        format!("duplicate vertex '{id}'"),
                    ));
                }
            }
            "arc" => self.arc_line(number, toks)?,
            other => {
                return Err(ParseError::new(
                    number,
                    col,
                    format!("unknown directive '{other}'"),
                ));
            }
        }
        Ok(())
    }

    fn arc_line(&mut self, number: usize, toks: &[(usize, &str)]) -> ParseResult<()> {
        if toks.len() != 4 && toks.len() != 5 {
            return Err(ParseError::new(
                number,
                toks[0].0,
                "expected 'arc <tail> <head> <colour> [block=<k>]'",
            ));
        }
        let tail = self.known_vertex(number, toks[1].0, toks[1].1)?;
        let head = self.known_vertex(number, toks[2].0, toks[2].1)?;
        if tail == head {
            return Err(ParseError::new(
                number,
                toks[1].0,
                format!("loop at vertex '{tail}': the host digraph is loopless"),
            ));
        }
        let colour = self.known_colour(number, toks[3].0, toks[3].1)?;
        let arc = Arc {
            tail: tail.clone(),
            head: head.clone(),
        };
        if self.arcs.insert(arc.clone(), number).is_some() {
            return Err(ParseError::new(
                number,
                toks[1].0,
                format!("duplicate arc '{arc}'"),
            ));
        }
        let block = match toks.get(4) {
            None => None,
            Some(&(col, tok)) => {
                let value = tok
                    .strip_prefix("block=")
                    .and_then(|v| v.parse::<usize>().ok())
                    .filter(|&v| v >= 1);
                match value {
                    Some(v) => Some(v),
                    None => {
                        return Err(ParseError::new(
                            number,
                            col,
                            format!("invalid block label '{tok}', expected block=<k> with k >= 1"),
                        ));
                    }
                }
            }
        };
        self.colouring.push((arc.clone(), colour.clone()));
        self.blocks.push((arc, block, number));
        Ok(())
    }

    fn known_colour(&self, line: usize, column: usize, id: &str) -> ParseResult<ColourId> {
        let id = ColourId::new(id);
        if self.colours.contains_key(&id) {
            Ok(id)
        } else {
            Err(ParseError::new(
                line,
                column,
                format!("unknown colour '{id}'"),
            ))
        }
    }

    fn known_vertex(&self, line: usize, column: usize, id: &str) -> ParseResult<VertexId> {
        let id = VertexId::new(id);
        if self.vertices.contains_key(&id) {
            Ok(id)
        } else {
            Err(ParseError::new(
                line,
                column,
                format!("unknown vertex '{id}'"),
            ))
        }
    }

    fn finish(self) -> ParseResult<(ColouredInstance, Option<ArcPartition>)> {
        let partition = self.partition()?;
        let host = HostDigraph::new(self.vertices.into_keys(), self.arcs.into_keys());
        let pattern = PatternDigraph::new(self.colours.into_keys(), self.pattern_arcs.into_keys());
        let colouring = Colouring::new(self.colouring);
        let instance = ColouredInstance::new(host, pattern, colouring)
            .expect("the parser enforces every instance invariant");
        Ok((instance, partition))
    }

    fn partition(&self) -> ParseResult<Option<ArcPartition>> {
        let labelled = self.blocks.iter().filter(|(_, b, _)| b.is_some()).count();
        if labelled == 0 && self.declared_blocks.is_none() {
            return Ok(None);
        }
        if let Some((arc, _, line)) = self.blocks.iter().find(|(_, b, _)| b.is_none()) {
            return Err(ParseError::new(
                *line,
                1,
                format!("arc '{arc}' is missing a block label while a partition is declared"),
            ));
        }
        let max_label = self.blocks.iter().filter_map(|(_, b, _)| *b).max();
        let count = match (self.declared_blocks, max_label) {
            (Some(declared), Some(max)) if declared < max => {
                let (_, _, line) = self
                    .blocks
                    .iter()
                    .find(|(_, b, _)| *b == Some(max))
                    .expect("label seen");
                return Err(ParseError::new(
                    *line,
                    1,
                    format!("block label {max} exceeds the declared block count {declared}"),
                ));
            }
            (Some(declared), _) => declared,
            (None, Some(max)) => max,
            (None, None) => unreachable!("guarded above"),
        };
        let mut blocks: Vec<ArcSet> = vec![ArcSet::new(); count];
        for (arc, block, _) in &self.blocks {
            blocks[block.expect("all labelled") - 1].insert(arc.clone());
        }
        let partition =
            ArcPartition::new(blocks).expect("disjoint by construction, one block per arc");
        Ok(Some(partition))
    }
}

/// Parses an instance document, reporting the first error with its line and
/// column.
pub fn parse_instance(text: &str) -> ParseResult<(ColouredInstance, Option<ArcPartition>)> {
    let mut parser = Parser::new();
    let mut any_line = false;
    for (i, raw) in text.lines().enumerate() {
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        any_line = true;
        parser.line(i + 1, &toks)?;
    }
    if !any_line {
        return Err(ParseError::new(1, 1, "empty document, expected 'hcd 1'"));
    }
    parser.finish()
}

/// Serializes an instance (and optional partition) in canonical form:
/// sections in fixed order, entries sorted, byte-deterministic.
///
/// The instance must be valid; with a partition, every arc must be covered
/// by exactly one block.
pub fn serialize_instance(instance: &ColouredInstance, partition: Option<&ArcPartition>) -> String {
    let mut out = String::from("hcd 1\n");
    if let Some(p) = partition {
        out.push_str(&format!("blocks {}\n", p.block_count()));
    }
    for colour in instance.pattern().vertices() {
        out.push_str(&format!("colour {colour}\n"));
    }
    for (from, to) in instance.pattern().arcs() {
        out.push_str(&format!("hedge {from} {to}\n"));
    }
    for vertex in instance.host().vertices() {
        out.push_str(&format!("vertex {vertex}\n"));
    }
    for arc in instance.host().arcs() {
        let colour = instance
            .colouring()
            .colour(arc)
            .expect("valid instances colour every arc");
        match partition {
            None => out.push_str(&format!("arc {} {} {colour}\n", arc.tail, arc.head)),
            Some(p) => {
                let block = p
                    .block_of(arc)
                    .expect("the partition covers every arc of the host");
                out.push_str(&format!(
                    "arc {} {} {colour} block={}\n",
                    arc.tail,
                    arc.head,
                    block + 1
                ));
            }
        }
    }
    out
}
