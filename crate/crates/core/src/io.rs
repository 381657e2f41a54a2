//! Plain-text formats for graphs, permutations, schedules, colorings and
//! partitions. Vertices are 0-indexed. Blank lines are ignored; errors carry
//! 1-based line numbers.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::perm::Permutation;
use crate::schedule::{MatchingStep, Schedule};

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

fn number(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::parse(line, format!("expected a non-negative integer, found {tok:?}")))
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace().map(|t| number(line, t)).collect()
}

/// `n m` followed by `m` lines `u v`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut it = lines(text);
    let (line, header) = it.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
    let head = numbers(line, header)?;
    let [n, m] = head[..] else {
        return Err(Error::parse(line, "header must be \"n m\""));
    };
    let mut edges = Vec::with_capacity(m);
    for (line, l) in it.by_ref().take(m) {
        let nums = numbers(line, l)?;
        let [u, v] = nums[..] else {
            return Err(Error::parse(line, "edge line must be \"u v\""));
        };
        if u >= n || v >= n {
            return Err(Error::parse(line, format!("edge {u} {v} out of range for n = {n}")));
        }
        if u == v {
            return Err(Error::parse(line, format!("self-loop at {u}")));
        }
        edges.push((line, u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(line, format!("header announces {m} edges, found {}", edges.len())));
    }
    if let Some((line, _)) = it.next() {
        return Err(Error::parse(line, "trailing content after edge list"));
    }
    let mut seen = std::collections::HashSet::new();
    for &(line, u, v) in &edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line, format!("duplicate edge {u} {v}")));
        }
    }
    Graph::new(n, edges.into_iter().map(|(_, u, v)| (u, v)))
}

pub fn format_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// `n` followed by the `n` images on one or more lines.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let mut it = lines(text);
    let (line, header) = it.next().ok_or_else(|| Error::parse(1, "empty permutation file"))?;
    let head = numbers(line, header)?;
    let [n] = head[..] else {
        return Err(Error::parse(line, "header must be \"n\""));
    };
    let mut image = Vec::with_capacity(n);
    let mut last = line;
    for (line, l) in it {
        last = line;
        for x in numbers(line, l)? {
            if x >= n {
                return Err(Error::parse(line, format!("image {x} out of range for n = {n}")));
            }
            image.push(x);
        }
    }
    if image.len() != n {
        return Err(Error::parse(last, format!("expected {n} images, found {}", image.len())));
    }
    Permutation::new(image).map_err(|e| Error::parse(last, e.to_string()))
}

pub fn format_permutation(pi: &Permutation) -> String {
    let body: Vec<String> = pi.image().iter().map(|x| x.to_string()).collect();
    format!("{}\n{}\n", pi.len(), body.join(" "))
}

fn parse_pair(line: usize, tok: &str) -> Result<(Vertex, Vertex)> {
    let (a, b) = tok.split_once('-').ok_or_else(|| Error::parse(line, format!("expected \"u-v\", found {tok:?}")))?;
    Ok((number(line, a)?, number(line, b)?))
}

/// `k` followed by `k` lines of `u-v` tokens. An empty step is written as an
/// empty line, so `k` counts only the step lines that follow.
pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let mut raw = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (line, header) = loop {
        match raw.next() {
            Some((_, "")) => continue,
            Some(x) => break x,
            None => return Err(Error::parse(1, "empty schedule file")),
        }
    };
    let head = numbers(line, header)?;
    let [k] = head[..] else {
        return Err(Error::parse(line, "header must be \"k\""));
    };
    let body: Vec<(usize, &str)> = raw.collect();
    let end = body.iter().rposition(|(_, l)| !l.is_empty()).map_or(0, |i| i + 1);
    let body = &body[..end.max(k.min(body.len()))];
    if body.len() != k {
        let at = body.last().map_or(line, |&(l, _)| l);
        return Err(Error::parse(at, format!("header announces {k} steps, found {}", body.len())));
    }
    let mut steps = Vec::with_capacity(k);
    for &(line, l) in body {
        let pairs = l.split_whitespace().map(|t| parse_pair(line, t)).collect::<Result<Vec<_>>>()?;
        steps.push(MatchingStep::new(pairs));
    }
    Ok(Schedule::new(steps))
}

pub fn format_schedule(s: &Schedule) -> String {
    let mut out = format!("{}\n", s.len());
    for step in s.steps() {
        let toks: Vec<String> = step.pairs().iter().map(|(u, v)| format!("{u}-{v}")).collect();
        let _ = writeln!(out, "{}", toks.join(" "));
    }
    out
}

/// One line `v color` per vertex.
pub fn parse_colors(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut colors = vec![None; n];
    let mut last = 0;
    for (line, l) in lines(text) {
        last = line;
        let nums = numbers(line, l)?;
        let [v, c] = nums[..] else {
            return Err(Error::parse(line, "color line must be \"v color\""));
        };
        if v >= n {
            return Err(Error::parse(line, format!("vertex {v} out of range for n = {n}")));
        }
        if colors[v].replace(c).is_some() {
            return Err(Error::parse(line, format!("vertex {v} colored twice")));
        }
    }
    colors
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::parse(last.max(1), format!("vertex {v} has no color"))))
        .collect()
}

pub fn format_colors(colors: &[usize]) -> String {
    colors.iter().enumerate().fold(String::new(), |mut s, (v, c)| {
        let _ = writeln!(s, "{v} {c}");
        s
    })
}

/// One line per block: the port (terminal) vertex followed by the other
/// members of the block.
pub fn parse_partition(text: &str) -> Result<Vec<Vec<Vertex>>> {
    let mut blocks = Vec::new();
    for (line, l) in lines(text) {
        blocks.push(numbers(line, l)?);
    }
    if blocks.is_empty() {
        return Err(Error::parse(1, "empty partition file"));
    }
    Ok(blocks)
}

pub fn format_partition(blocks: &[Vec<Vertex>]) -> String {
    blocks.iter().fold(String::new(), |mut s, b| {
        let toks: Vec<String> = b.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", toks.join(" "));
        s
    })
}

/// Whitespace- or comma-separated vertex list, as used by `--ports`/`--clique`.
pub fn parse_vertex_list(text: &str) -> Result<Vec<Vertex>> {
    text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(|t| number(1, t)).collect()
}
