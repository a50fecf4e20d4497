//! Reading and writing PrefLib election files.
//!
//! Both the current layout (`# KEY: value` headers, `count: ranking` lines)
//! and the legacy layout (candidate count, `id,name` lines, a totals line,
//! `count,ranking` lines) are read; output always uses the current layout.
//! Candidates are numbered from 1 in files and from 0 internally.
//!
//! In incomplete orders (`soi`, `toi`, and legacy files) candidates left
//! out of a ballot form a shared bottom class, so a truncated ballot reads
//! as a top order. Local weak and partial votes, which PrefLib cannot
//! express, are written with the `pairs` data type: each line lists the
//! strict pairs `a>b` of one vote and unmentioned candidates are isolated.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::model::{Axis, CandidateId, OrderClass, PreferenceOrder, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataType {
    /// Strict orders, complete.
    Soc,
    /// Strict orders, incomplete.
    Soi,
    /// Orders with ties, complete.
    Toc,
    /// Orders with ties, incomplete.
    Toi,
    /// Explicit strict pairs per vote.
    Pairs,
}

impl DataType {
    pub fn name(self) -> &'static str {
        match self {
            DataType::Soc => "soc",
            DataType::Soi => "soi",
            DataType::Toc => "toc",
            DataType::Toi => "toi",
            DataType::Pairs => "pairs",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "soc" => DataType::Soc,
            "soi" => DataType::Soi,
            "toc" => DataType::Toc,
            "toi" => DataType::Toi,
            "pairs" => DataType::Pairs,
            _ => return None,
        })
    }

    fn allows_ties(self) -> bool {
        matches!(self, DataType::Toc | DataType::Toi)
    }

    fn is_complete(self) -> bool {
        matches!(self, DataType::Soc | DataType::Toc)
    }

    /// The loosest vote class this data type can hold.
    fn capacity(self) -> OrderClass {
        match self {
            DataType::Soc => OrderClass::Total,
            DataType::Soi => OrderClass::Top,
            DataType::Toc | DataType::Toi => OrderClass::Weak,
            DataType::Pairs => OrderClass::Partial,
        }
    }

    /// The tightest data type that can hold every order of `class`.
    pub fn for_class(class: OrderClass) -> Self {
        match class {
            OrderClass::Total => DataType::Soc,
            OrderClass::Top => DataType::Soi,
            OrderClass::Weak => DataType::Toc,
            OrderClass::LocalWeak | OrderClass::Partial => DataType::Pairs,
        }
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A profile with candidate names and the file's descriptive headers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    pub profile: Profile,
    pub names: Vec<String>,
    /// Data type declared by the file, if any.
    pub data_type: Option<DataType>,
    /// Headers other than the structural ones, in file order.
    pub metadata: Vec<(String, String)>,
}

impl Election {
    /// Candidates named by their 1-based file numbers.
    pub fn new(profile: Profile) -> Self {
        let names = (1..=profile.num_candidates()).map(|i| i.to_string()).collect();
        Election {
            profile,
            names,
            data_type: None,
            metadata: Vec::new(),
        }
    }

    pub fn with_names(profile: Profile, names: Vec<String>) -> Result<Self> {
        if names.len() != profile.num_candidates() {
            return Err(Error::SizeMismatch {
                expected: profile.num_candidates(),
                found: names.len(),
            });
        }
        Ok(Election {
            names,
            ..Election::new(profile)
        })
    }

    pub fn name(&self, c: CandidateId) -> &str {
        &self.names[c.index()]
    }

    /// Looks a candidate up by name, falling back to its 1-based number.
    pub fn candidate(&self, token: &str) -> Option<CandidateId> {
        if let Some(i) = self.names.iter().position(|n| n == token) {
            return Some(CandidateId(i));
        }
        match token.parse::<usize>() {
            Ok(i) if (1..=self.names.len()).contains(&i) => Some(CandidateId(i - 1)),
            _ => None,
        }
    }

    /// The data type used when writing: the declared one if it can hold
    /// every vote, else the tightest one that can.
    pub fn output_type(&self) -> DataType {
        let class = self.profile.class();
        match self.data_type {
            Some(t) if class.within(t.capacity()) => t,
            _ => DataType::for_class(class),
        }
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a PrefLib file in either layout.
pub fn parse_preflib(text: &str) -> Result<Election> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| parse_error(1, 1, "empty input"))?;
    if first.starts_with('#') {
        parse_current(text)
    } else {
        parse_legacy(text)
    }
}

const NAME_PREFIX: &str = "ALTERNATIVE NAME ";

fn parse_current(text: &str) -> Result<Election> {
    let mut m: Option<usize> = None;
    let mut data_type = None;
    let mut names: Vec<(usize, usize, String)> = Vec::new();
    let mut metadata = Vec::new();
    let mut ballots: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let Some(header) = trimmed.strip_prefix('#') else {
            ballots.push((line, raw));
            continue;
        };
        let header = header.trim();
        let Some((key, value)) = header.split_once(':') else {
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "DATA TYPE" => {
                data_type = Some(DataType::parse(value).ok_or_else(|| {
                    parse_error(line, 1, format!("unsupported data type `{value}`"))
                })?);
            }
            "NUMBER ALTERNATIVES" => {
                m = Some(value.parse().map_err(|_| parse_error(line, 1, "invalid number of alternatives"))?);
            }
            "NUMBER VOTERS" | "NUMBER UNIQUE ORDERS" => {}
            _ => match key.strip_prefix(NAME_PREFIX) {
                Some(idx) => {
                    let idx = idx
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| parse_error(line, 1, "invalid alternative number"))?;
                    names.push((line, idx, value.to_string()));
                }
                None => metadata.push((key.to_string(), value.to_string())),
            },
        }
    }
    let m = m
        .or_else(|| names.iter().map(|&(_, i, _)| i).max())
        .ok_or_else(|| parse_error(1, 1, "missing NUMBER ALTERNATIVES header"))?;
    let names = collect_names(m, names)?;
    let semantics = data_type.unwrap_or(DataType::Toi);
    let mut votes = Vec::with_capacity(ballots.len());
    let mut counts = Vec::with_capacity(ballots.len());
    for (line, raw) in ballots {
        let colon = raw.find(':').ok_or_else(|| parse_error(line, 1, "expected `count: ranking`"))?;
        counts.push(parse_count(&raw[..colon], line, 1)?);
        votes.push(parse_ballot(&raw[colon + 1..], line, colon + 2, m, semantics)?);
    }
    Ok(Election {
        profile: Profile::with_multiplicities(m, votes, counts)?,
        names,
        data_type,
        metadata,
    })
}

fn parse_legacy(text: &str) -> Result<Election> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let (line, raw) = lines.next().ok_or_else(|| parse_error(1, 1, "empty input"))?;
    let m: usize = raw
        .trim()
        .parse()
        .map_err(|_| parse_error(line, 1, "expected the number of candidates"))?;
    let mut names = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, raw) = lines.next().ok_or_else(|| parse_error(line, 1, "missing candidate lines"))?;
        let (idx, name) = raw
            .split_once(',')
            .ok_or_else(|| parse_error(line, 1, "expected `number,name`"))?;
        let idx = idx
            .trim()
            .parse::<usize>()
            .map_err(|_| parse_error(line, 1, "invalid candidate number"))?;
        names.push((line, idx, name.trim().to_string()));
    }
    let names = collect_names(m, names)?;
    lines.next().ok_or_else(|| parse_error(line, 1, "missing voter totals line"))?;
    let mut votes = Vec::new();
    let mut counts = Vec::new();
    for (line, raw) in lines {
        let comma = raw.find(',').unwrap_or(raw.len());
        counts.push(parse_count(&raw[..comma], line, 1)?);
        let rest = raw.get(comma + 1..).unwrap_or("");
        votes.push(parse_ballot(rest, line, comma + 2, m, DataType::Toi)?);
    }
    Ok(Election {
        profile: Profile::with_multiplicities(m, votes, counts)?,
        names,
        data_type: None,
        metadata: Vec::new(),
    })
}

fn collect_names(m: usize, entries: Vec<(usize, usize, String)>) -> Result<Vec<String>> {
    let mut names: Vec<Option<String>> = vec![None; m];
    for (line, idx, name) in entries {
        if idx == 0 || idx > m {
            return Err(Error::UnknownCandidate {
                line,
                name: idx.to_string(),
            });
        }
        if names[idx - 1].replace(name).is_some() {
            return Err(parse_error(line, 1, format!("alternative {idx} is named twice")));
        }
    }
    Ok(names
        .into_iter()
        .enumerate()
        .map(|(i, n)| n.unwrap_or_else(|| (i + 1).to_string()))
        .collect())
}

fn parse_count(s: &str, line: usize, column: usize) -> Result<u64> {
    match s.trim().parse::<u64>() {
        Ok(k) if k > 0 => Ok(k),
        _ => Err(parse_error(line, column, format!("invalid voter count `{}`", s.trim()))),
    }
}

/// Character cursor over one ballot, tracking 1-based columns.
struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    line: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize, base: usize) -> Self {
        Cursor {
            chars: text.char_indices().peekable(),
            text,
            line,
            base,
        }
    }

    fn column(&mut self) -> usize {
        self.base + self.chars.peek().map_or(self.text.len(), |&(i, _)| i)
    }

    fn skip_spaces(&mut self) {
        while self.chars.next_if(|&(_, ch)| ch.is_whitespace()).is_some() {}
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_spaces();
        self.chars.peek().map(|&(_, ch)| ch)
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_spaces();
        self.chars.next_if(|&(_, ch)| ch == want).is_some()
    }

    fn error(&mut self, message: impl Into<String>) -> Error {
        let column = self.column();
        parse_error(self.line, column, message)
    }

    fn candidate(&mut self, m: usize) -> Result<CandidateId> {
        self.skip_spaces();
        let start = self.chars.peek().map_or(self.text.len(), |&(i, _)| i);
        let mut end = start;
        while let Some((i, ch)) = self.chars.next_if(|&(_, ch)| ch.is_ascii_alphanumeric() || ch == '_') {
            end = i + ch.len_utf8();
        }
        let token = &self.text[start..end];
        if token.is_empty() {
            return Err(self.error("expected a candidate number"));
        }
        match token.parse::<usize>() {
            Ok(k) if (1..=m).contains(&k) => Ok(CandidateId(k - 1)),
            _ => Err(Error::UnknownCandidate {
                line: self.line,
                name: token.to_string(),
            }),
        }
    }
}

fn parse_ballot(text: &str, line: usize, base: usize, m: usize, data_type: DataType) -> Result<PreferenceOrder> {
    let mut cur = Cursor::new(text, line, base);
    let mut seen = vec![false; m];
    let mut mark = |cur: &mut Cursor, c: CandidateId| {
        if std::mem::replace(&mut seen[c.index()], true) {
            Err(cur.error(format!("candidate {} listed twice", c.index() + 1)))
        } else {
            Ok(())
        }
    };
    if data_type == DataType::Pairs {
        let mut pairs = Vec::new();
        if cur.peek().is_some() {
            loop {
                let a = cur.candidate(m)?;
                if !cur.eat('>') {
                    return Err(cur.error("expected `>`"));
                }
                let b = cur.candidate(m)?;
                pairs.push((a, b));
                if !cur.eat(',') {
                    break;
                }
            }
        }
        if cur.peek().is_some() {
            return Err(cur.error("unexpected character"));
        }
        return PreferenceOrder::from_pairs(m, pairs).map_err(|e| parse_error(line, base, e.to_string()));
    }
    let mut buckets: Vec<Vec<CandidateId>> = Vec::new();
    if cur.peek().is_some() {
        loop {
            if cur.peek() == Some('{') {
                if !data_type.allows_ties() {
                    return Err(cur.error(format!("ties are not allowed in {data_type} files")));
                }
                cur.eat('{');
                let mut bucket = Vec::new();
                if cur.peek() != Some('}') {
                    loop {
                        let c = cur.candidate(m)?;
                        mark(&mut cur, c)?;
                        bucket.push(c);
                        if !cur.eat(',') {
                            break;
                        }
                    }
                }
                if !cur.eat('}') {
                    return Err(cur.error("expected `}`"));
                }
                buckets.push(bucket);
            } else {
                let c = cur.candidate(m)?;
                mark(&mut cur, c)?;
                buckets.push(vec![c]);
            }
            if !cur.eat(',') {
                break;
            }
        }
    }
    if cur.peek().is_some() {
        return Err(cur.error("unexpected character"));
    }
    if data_type.is_complete() && buckets.iter().map(Vec::len).sum::<usize>() != m {
        return Err(parse_error(line, base, format!("a {data_type} ballot must rank all {m} candidates")));
    }
    PreferenceOrder::truncated(m, buckets)
}

/// Writes the current PrefLib layout. Ties inside a class are listed in
/// increasing candidate order.
pub fn write_preflib(election: &Election) -> String {
    let profile = &election.profile;
    let data_type = election.output_type();
    let mut out = String::new();
    for (k, v) in &election.metadata {
        let _ = writeln!(out, "# {k}: {v}");
    }
    let _ = writeln!(out, "# DATA TYPE: {data_type}");
    let _ = writeln!(out, "# NUMBER ALTERNATIVES: {}", profile.num_candidates());
    let _ = writeln!(out, "# NUMBER VOTERS: {}", profile.num_voters());
    let _ = writeln!(out, "# NUMBER UNIQUE ORDERS: {}", profile.num_votes());
    for (i, name) in election.names.iter().enumerate() {
        let _ = writeln!(out, "# {NAME_PREFIX}{}: {name}", i + 1);
    }
    for (vote, count) in profile.iter() {
        let _ = writeln!(out, "{count}: {}", ballot_text(vote, data_type));
    }
    out
}

fn ballot_text(vote: &PreferenceOrder, data_type: DataType) -> String {
    let num = |c: &CandidateId| (c.index() + 1).to_string();
    if data_type == DataType::Pairs {
        return vote
            .pairs()
            .iter()
            .map(|(a, b)| format!("{}>{}", num(a), num(b)))
            .collect::<Vec<_>>()
            .join(",");
    }
    let mut buckets = vote.buckets().expect("weak orders are stored by level");
    if !data_type.is_complete() {
        if let Some(last) = buckets.last() {
            if last.len() > 1 {
                buckets = &buckets[..buckets.len() - 1];
            }
        }
    }
    buckets
        .iter()
        .map(|b| match b.as_slice() {
            [c] => num(c),
            _ => format!("{{{}}}", b.iter().map(num).collect::<Vec<_>>().join(",")),
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses an axis given as candidate names or 1-based numbers separated by
/// commas, whitespace or `>`.
pub fn parse_axis(text: &str, election: &Election) -> Result<Axis> {
    let mut order = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for token in line.split(|ch: char| ch == ',' || ch == '>' || ch.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let c = election.candidate(token).ok_or_else(|| Error::UnknownCandidate {
                line: i + 1,
                name: token.to_string(),
            })?;
            order.push(c);
        }
    }
    if order.len() != election.profile.num_candidates() {
        return Err(Error::SizeMismatch {
            expected: election.profile.num_candidates(),
            found: order.len(),
        });
    }
    Axis::new(order)
}
