//! Brute-force LCS over small alphabets, used to check the dynamic program.
//!
//! Symbols: 0..=2 are words, 3 is a numeric token, 4 is the `<N>` sentinel
//! (pattern side only), 5 is a filler word never used by the pattern.

#![allow(dead_code)]

use perfreq_core::matcher::lcs_tokens;
use perfreq_core::text::Token;

pub const NUMERIC: u8 = 3;
pub const SENTINEL: u8 = 4;
pub const FILLER: u8 = 5;
const SURFACES: [&str; 6] = ["p", "q", "r", "7", "<N>", "x"];

pub fn surface(symbol: u8) -> &'static str {
    SURFACES[symbol as usize]
}

fn matches(p: u8, r: u8) -> bool {
    p == r || (p == SENTINEL && r == NUMERIC)
}

const MAX: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct Alignment {
    len: usize,
    req: [usize; MAX],
    pat: [usize; MAX],
}

impl Alignment {
    pub fn req_positions(&self) -> &[usize] {
        &self.req[..self.len]
    }

    pub fn pattern_positions(&self) -> &[usize] {
        &self.pat[..self.len]
    }

    fn better_than(&self, other: &Alignment) -> bool {
        let (a, b) = (self, other);
        let window = |p: &Alignment| p.req[p.len - 1] - p.req[0];
        b.len
            .cmp(&a.len)
            .then(window(a).cmp(&window(b)))
            .then(a.req[0].cmp(&b.req[0]))
            .then(a.req[..a.len].cmp(&b.req[..b.len]))
            .then(a.pat[..a.len].cmp(&b.pat[..b.len]))
            .is_lt()
    }
}

/// Walks every alignment (pairs of increasing index tuples whose symbols
/// match) and keeps the best by (longest, narrowest window, earliest start,
/// smallest requirement positions, smallest pattern positions). `None` when
/// nothing matches.
pub fn best_alignment(pattern: &[u8], req: &[u8]) -> Option<Alignment> {
    fn walk(pattern: &[u8], req: &[u8], cur: &mut Alignment, best: &mut Option<Alignment>) {
        let (p0, r0) = if cur.len == 0 { (0, 0) } else { (cur.pat[cur.len - 1] + 1, cur.req[cur.len - 1] + 1) };
        // Branches that cannot reach the best length found so far are cut;
        // equal lengths are still explored for the tie order.
        let reachable = cur.len + (pattern.len() - p0).min(req.len() - r0);
        if best.as_ref().is_some_and(|b| reachable < b.len) {
            return;
        }
        for pi in p0..pattern.len() {
            for ri in r0..req.len() {
                if !matches(pattern[pi], req[ri]) {
                    continue;
                }
                cur.pat[cur.len] = pi;
                cur.req[cur.len] = ri;
                cur.len += 1;
                if best.as_ref().is_none_or(|b| cur.better_than(b)) {
                    *best = Some(*cur);
                }
                walk(pattern, req, cur, best);
                cur.len -= 1;
            }
        }
    }
    assert!(pattern.len() <= MAX && req.len() <= MAX);
    let mut best = None;
    let mut cur = Alignment { len: 0, req: [0; MAX], pat: [0; MAX] };
    walk(pattern, req, &mut cur, &mut best);
    best
}

/// Requirement alphabet, then each requirement with its tokens.
type TokenCache = Vec<(Vec<u8>, Vec<(Vec<u8>, Vec<Token>)>)>;

/// Enumerates canonical pattern/requirement pairs up to the given lengths and
/// compares the dynamic program with the oracle, returning the number of
/// pairs checked or a description of the first disagreement.
///
/// Word symbols are relabeled in order of first appearance in the pattern,
/// and requirement tokens no pattern symbol can match (unused words, and
/// numbers when the pattern has no numeric symbol) collapse to one filler;
/// neither step changes any alignment, so every pair over the full alphabet
/// is covered up to renaming.
pub fn check_exhaustive(max_pattern: usize, max_req: usize) -> Result<usize, String> {
    let mut checked = 0;
    let mut token_cache: TokenCache = Vec::new();
    for m in 0..=max_pattern {
        for pattern in sequences(&[0, 1, 2, NUMERIC, SENTINEL], m) {
            if !canonical(&pattern) {
                continue;
            }
            let used = pattern.iter().filter(|&&s| s < NUMERIC).max().map_or(0, |&s| s + 1);
            let numeric = pattern.iter().any(|&s| s == NUMERIC || s == SENTINEL);
            let mut alphabet: Vec<u8> = (0..used).collect();
            if numeric {
                alphabet.push(NUMERIC);
            }
            if used < 3 || !numeric {
                alphabet.push(FILLER);
            }
            let pattern_tokens: Vec<&str> = pattern.iter().map(|&s| surface(s)).collect();
            if !token_cache.iter().any(|(a, _)| *a == alphabet) {
                let reqs = (0..=max_req)
                    .flat_map(|n| sequences(&alphabet, n))
                    .map(|req| {
                        let tokens = req.iter().enumerate().map(|(i, &s)| Token::new(surface(s), i)).collect();
                        (req, tokens)
                    })
                    .collect();
                token_cache.push((alphabet.clone(), reqs));
            }
            let reqs = &token_cache.iter().find(|(a, _)| *a == alphabet).unwrap().1;
            {
                for (req, tokens) in reqs {
                    let got = lcs_tokens(&pattern_tokens, tokens);
                    let want = best_alignment(&pattern, req);
                    let agree = match &want {
                        None => got.length == 0,
                        Some(a) => {
                            let v_beta = a
                                .pattern_positions()
                                .iter()
                                .any(|&p| pattern[p] == SENTINEL)
                                .then_some(7.0);
                            let r = a.req_positions();
                            got.length == r.len()
                                && got.positions == r
                                && got.pattern_positions == a.pattern_positions()
                                && got.span() == r[r.len() - 1] - r[0] + 1
                                && got.v_beta == v_beta
                        }
                    };
                    if !agree {
                        return Err(format!("pattern {pattern_tokens:?} req {req:?}: dp {got:?}, oracle {want:?}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn canonical(pattern: &[u8]) -> bool {
    let mut next = 0;
    for &s in pattern {
        if s < NUMERIC {
            if s > next {
                return false;
            }
            if s == next {
                next += 1;
            }
        }
    }
    true
}

fn sequences(alphabet: &[u8], n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|s| alphabet.iter().map(move |&a| [s.as_slice(), &[a]].concat())).collect();
    }
    out
}
