//! Constructible coordinate sets: a coordinate subspace minus a finite
//! union of coordinate subspaces.
//!
//! A set is stored combinatorially as an ambient support `A` (the
//! coordinates allowed to be nonzero) and a list of excluded supports,
//! each a subset of `A`; the points are `Span(A) \ U_i Span(B_i)`.
//! Canonical form intersects every excluded support with `A` and keeps
//! only the maximal ones, which makes syntactic equality coincide with
//! equality of the underlying point sets.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordSet {
    /// Sorted coordinate indices allowed to be nonzero.
    ambient: Vec<usize>,
    /// Sorted, canonical (maximal, pairwise incomparable) excluded supports.
    excluded: Vec<Vec<usize>>,
}

fn sorted_dedup(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

impl CoordSet {
    /// Builds the canonical form of `Span(ambient) \ U Span(excluded_i)`.
    pub fn new<I, J>(ambient: I, excluded: J) -> CoordSet
    where
        I: IntoIterator<Item = usize>,
        J: IntoIterator<Item = Vec<usize>>,
    {
        let ambient = sorted_dedup(ambient.into_iter().collect());
        let mut excl: Vec<Vec<usize>> = excluded
            .into_iter()
            .map(|b| intersect(&sorted_dedup(b), &ambient))
            .collect();
        excl.sort();
        excl.dedup();
        // keep only maximal excluded supports
        let mut maximal: Vec<Vec<usize>> = Vec::new();
        for b in &excl {
            if !excl.iter().any(|c| c != b && is_subset(b, c)) {
                maximal.push(b.clone());
            }
        }
        if maximal.contains(&ambient) {
            // excluding the whole span leaves the empty set
            return CoordSet { ambient: Vec::new(), excluded: vec![Vec::new()] };
        }
        CoordSet { ambient, excluded: maximal }
    }

    /// The full coordinate subspace `Span(ambient)`, nothing removed.
    pub fn span<I: IntoIterator<Item = usize>>(ambient: I) -> CoordSet {
        CoordSet::new(ambient, Vec::<Vec<usize>>::new())
    }

    /// The origin as a constructible set.
    pub fn origin() -> CoordSet {
        CoordSet::span(Vec::new())
    }

    pub fn ambient(&self) -> &[usize] {
        &self.ambient
    }

    pub fn excluded(&self) -> &[Vec<usize>] {
        &self.excluded
    }

    pub fn is_empty(&self) -> bool {
        self.ambient.is_empty() && self.excluded.iter().any(|b| b.is_empty())
    }

    /// True iff the two sets have the same closed points. Canonical forms
    /// are unique, so this is structural equality.
    pub fn set_eq(&self, other: &CoordSet) -> bool {
        self == other
    }

    /// Renders in subscript-V notation with respect to column labels:
    /// the ambient span prints as the vanishing locus of the complementary
    /// columns, and each excluded support `B` prints as the vanishing locus
    /// of `ambient \ B` that cuts it out inside the ambient span.
    pub fn render(&self, labels: &[String]) -> String {
        if self.is_empty() {
            return "(empty)".to_string();
        }
        let all: Vec<usize> = (0..labels.len()).collect();
        let complement: Vec<usize> =
            all.iter().copied().filter(|i| self.ambient.binary_search(i).is_err()).collect();
        let mut out = render_vanishing(&complement, labels);
        for b in &self.excluded {
            let cut: Vec<usize> =
                self.ambient.iter().copied().filter(|i| b.binary_search(i).is_err()).collect();
            out.push_str(" \\ ");
            out.push_str(&render_vanishing(&cut, labels));
        }
        out
    }
}

/// `V_S` for a set of vanishing columns; `0` when every column vanishes
/// and `A` when none does.
fn render_vanishing(columns: &[usize], labels: &[String]) -> String {
    if columns.len() == labels.len() {
        return "0".to_string();
    }
    if columns.is_empty() {
        return "A".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut seen: Vec<&str> = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        if seen.contains(&label.as_str()) {
            continue;
        }
        let group: Vec<usize> =
            labels.iter().enumerate().filter(|(_, l)| *l == label).map(|(j, _)| j).collect();
        let included: Vec<usize> =
            group.iter().copied().filter(|j| columns.binary_search(j).is_ok()).collect();
        if included.is_empty() {
            seen.push(label);
            continue;
        }
        if included.len() == group.len() {
            parts.push(label.clone());
        } else {
            for j in included {
                parts.push(format!("{label}[{j}]"));
            }
        }
        seen.push(label);
        let _ = i;
    }
    format!("V_{{{}}}", parts.join(""))
}

/// Parses subscript-V notation back into a constructible set, given the
/// column labels. Accepts `0` for the origin and terms separated by `\`.
/// Each label in a subscript selects every column carrying that label.
pub fn parse_v_notation(text: &str, labels: &[String]) -> Option<CoordSet> {
    let terms: Vec<&str> = text.split('\\').map(str::trim).collect();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for t in &terms {
        sets.push(parse_vanishing(t, labels)?);
    }
    let all: Vec<usize> = (0..labels.len()).collect();
    let ambient: Vec<usize> =
        all.iter().copied().filter(|i| !sets[0].contains(i)).collect();
    let excluded: Vec<Vec<usize>> = sets[1..]
        .iter()
        .map(|vanish| ambient.iter().copied().filter(|i| !vanish.contains(i)).collect())
        .collect();
    Some(CoordSet::new(ambient, excluded))
}

fn parse_vanishing(term: &str, labels: &[String]) -> Option<Vec<usize>> {
    if term == "0" {
        return Some((0..labels.len()).collect());
    }
    let body = term.strip_prefix("V_")?;
    let body = body.strip_prefix('{').map_or(body, |b| b.strip_suffix('}').unwrap_or(b));
    let mut cols = Vec::new();
    let mut rest = body;
    'outer: while !rest.is_empty() {
        // longest-label-first match so multi-character labels work
        let mut names: Vec<&String> = labels.iter().collect();
        names.sort_by_key(|l| std::cmp::Reverse(l.len()));
        names.dedup();
        for name in names {
            if let Some(r) = rest.strip_prefix(name.as_str()) {
                for (j, l) in labels.iter().enumerate() {
                    if l == name {
                        cols.push(j);
                    }
                }
                rest = r;
                continue 'outer;
            }
        }
        return None;
    }
    Some(sorted_dedup(cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> Vec<String> {
        ["x", "x", "x", "y", "y", "y", "p", "q"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn canonicalization_keeps_maximal_supports() {
        let s = CoordSet::new(vec![0, 1, 2, 6], vec![vec![6], vec![6, 7], vec![0, 6]]);
        // {6,7} meets the ambient in {6}, which is swallowed by {0,6}
        assert_eq!(s.excluded(), &[vec![0, 6]]);
    }

    #[test]
    fn identity_and_emptiness() {
        let a = CoordSet::span(vec![1, 2]);
        assert!(a.set_eq(&CoordSet::span(vec![2, 1])));
        let empty = CoordSet::new(vec![4], vec![vec![4]]);
        assert!(empty.is_empty());
        assert!(empty.set_eq(&CoordSet::new(vec![0, 1], vec![vec![0, 1]])));
    }

    #[test]
    fn v_notation_round_trips_table_entries() {
        let labels = labels();
        // span of the y-columns minus the origin
        let z = CoordSet::new(vec![3, 4, 5], vec![vec![]]);
        let parsed = parse_v_notation("V_{xpq} \\ V_{xy}", &labels).unwrap();
        assert!(z.set_eq(&parsed));
        // the same set cut out with a different excluded description
        let parsed2 = parse_v_notation("V_{xpq} \\ V_{y}", &labels).unwrap();
        assert!(z.set_eq(&parsed2));
        assert_eq!(z.render(&labels), "V_{xpq} \\ V_{y}");
    }

    #[test]
    fn v_notation_with_nontrivial_exclusion() {
        let labels = labels();
        // y = q = 0 minus the locus x = 0
        let z = CoordSet::new(vec![0, 1, 2, 6], vec![vec![6]]);
        let parsed = parse_v_notation("V_{yq} \\ V_x", &labels).unwrap();
        assert!(z.set_eq(&parsed));
        assert_eq!(z.render(&labels), "V_{yq} \\ V_{x}");
    }

    #[test]
    fn origin_renders_as_zero() {
        let labels = labels();
        assert_eq!(CoordSet::origin().render(&labels), "0");
        assert!(CoordSet::origin().set_eq(&parse_v_notation("0", &labels).unwrap()));
    }

    #[test]
    fn partial_group_rendering_uses_indices() {
        let labels = labels();
        let s = CoordSet::span(vec![0, 3, 4, 5, 6, 7]);
        // only two of the three x-columns vanish
        assert_eq!(s.render(&labels), "V_{x[1]x[2]}");
    }
}
