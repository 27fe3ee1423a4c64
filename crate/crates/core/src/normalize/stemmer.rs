//! Snowball Spanish stemmer.
//!
//! Works on `char` indices. The three regions (RV, R1, R2) are fixed once from
//! the input word; every later step only removes or rewrites a suffix, so the
//! region starts stay valid while the word shrinks.

use alloc::string::String;
use alloc::vec::Vec;

fn is_vowel(c: char) -> bool {
    matches!(
        c,
        'a' | 'e' | 'i' | 'o' | 'u' | 'á' | 'é' | 'í' | 'ó' | 'ú' | 'ü'
    )
}

const PRONOUNS: &[&str] = &[
    "me", "se", "sela", "selo", "selas", "selos", "la", "le", "lo", "las", "les", "los", "nos",
];

const PRONOUN_HOSTS: &[&str] = &[
    "iéndo", "ándo", "ár", "ér", "ír", "ando", "iendo", "ar", "er", "ir", "yendo",
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Standard {
    Delete,
    DeleteThenIc,
    Log,
    U,
    Ente,
    Amente,
    Mente,
    Idad,
    Iv,
}

const STANDARD: &[(&str, Standard)] = &[
    ("anza", Standard::Delete),
    ("anzas", Standard::Delete),
    ("ico", Standard::Delete),
    ("ica", Standard::Delete),
    ("icos", Standard::Delete),
    ("icas", Standard::Delete),
    ("ismo", Standard::Delete),
    ("ismos", Standard::Delete),
    ("able", Standard::Delete),
    ("ables", Standard::Delete),
    ("ible", Standard::Delete),
    ("ibles", Standard::Delete),
    ("ista", Standard::Delete),
    ("istas", Standard::Delete),
    ("oso", Standard::Delete),
    ("osa", Standard::Delete),
    ("osos", Standard::Delete),
    ("osas", Standard::Delete),
    ("amiento", Standard::Delete),
    ("amientos", Standard::Delete),
    ("imiento", Standard::Delete),
    ("imientos", Standard::Delete),
    ("adora", Standard::DeleteThenIc),
    ("ador", Standard::DeleteThenIc),
    ("ación", Standard::DeleteThenIc),
    ("adoras", Standard::DeleteThenIc),
    ("adores", Standard::DeleteThenIc),
    ("aciones", Standard::DeleteThenIc),
    ("ante", Standard::DeleteThenIc),
    ("antes", Standard::DeleteThenIc),
    ("ancia", Standard::DeleteThenIc),
    ("ancias", Standard::DeleteThenIc),
    ("logía", Standard::Log),
    ("logías", Standard::Log),
    ("ución", Standard::U),
    ("uciones", Standard::U),
    ("encia", Standard::Ente),
    ("encias", Standard::Ente),
    ("amente", Standard::Amente),
    ("mente", Standard::Mente),
    ("idad", Standard::Idad),
    ("idades", Standard::Idad),
    ("iva", Standard::Iv),
    ("ivo", Standard::Iv),
    ("ivas", Standard::Iv),
    ("ivos", Standard::Iv),
];

const Y_VERB: &[&str] = &[
    "ya", "ye", "yan", "yen", "yeron", "yendo", "yo", "yó", "yas", "yes", "yais", "yamos",
];

// Endings after which a preceding "gu" loses its "u" as well.
const VERB_GU: &[&str] = &["en", "es", "éis", "emos"];

const VERB: &[&str] = &[
    "en", "es", "éis", "emos", "arían", "arías", "arán", "arás", "aríais", "aría", "aréis",
    "aríamos", "aremos", "ará", "aré", "erían", "erías", "erán", "erás", "eríais", "ería",
    "eréis", "eríamos", "eremos", "erá", "eré", "irían", "irías", "irán", "irás", "iríais",
    "iría", "iréis", "iríamos", "iremos", "irá", "iré", "aba", "ada", "ida", "ía", "ara",
    "iera", "ad", "ed", "id", "ase", "iese", "aste", "iste", "an", "aban", "ían", "aran",
    "ieran", "asen", "iesen", "aron", "ieron", "ado", "ido", "ando", "iendo", "ió", "ar", "er",
    "ir", "as", "abas", "adas", "idas", "ías", "aras", "ieras", "ases", "ieses", "ís", "áis",
    "abais", "íais", "arais", "ierais", "aseis", "ieseis", "asteis", "isteis", "ados", "idos",
    "amos", "ábamos", "íamos", "imos", "áramos", "iéramos", "iésemos", "ásemos",
];

const RESIDUAL: &[&str] = &["os", "a", "o", "á", "í", "ó", "e", "é"];

struct Regions {
    rv: usize,
    r1: usize,
    r2: usize,
}

impl Regions {
    fn mark(w: &[char]) -> Self {
        let n = w.len();
        let mut rv = n;
        if n >= 2 {
            let after = |from: usize, want_vowel: bool| {
                (from..n).find(|&i| is_vowel(w[i]) == want_vowel).map(|i| i + 1)
            };
            let found = match (is_vowel(w[0]), is_vowel(w[1])) {
                (true, false) => after(2, true),
                (true, true) => after(2, false),
                (false, false) => after(2, true),
                (false, true) => (n > 2).then_some(3),
            };
            if let Some(pos) = found {
                rv = pos;
            }
        }

        let gopast_vc = |from: usize| -> Option<usize> {
            let v = (from..n).find(|&i| is_vowel(w[i]))?;
            (v + 1..n).find(|&i| !is_vowel(w[i])).map(|i| i + 1)
        };
        let r1 = gopast_vc(0).unwrap_or(n);
        let r2 = if r1 < n { gopast_vc(r1).unwrap_or(n) } else { n };
        Regions { rv, r1, r2 }
    }
}

fn ends_with_at(w: &[char], end: usize, suffix: &str) -> Option<usize> {
    let len = suffix.chars().count();
    if len > end {
        return None;
    }
    let start = end - len;
    w[start..end]
        .iter()
        .copied()
        .eq(suffix.chars())
        .then_some(start)
}

/// Longest entry of `list` that ends at `end`, with its start index.
fn longest<'a>(w: &[char], end: usize, list: &[&'a str]) -> Option<(&'a str, usize)> {
    list.iter()
        .filter_map(|s| ends_with_at(w, end, s).map(|start| (*s, start)))
        .min_by_key(|&(_, start)| start)
}

fn replace_tail(w: &mut Vec<char>, start: usize, with: &str) {
    w.truncate(start);
    w.extend(with.chars());
}

fn attached_pronoun(w: &mut Vec<char>, r: &Regions) {
    let Some((_, pron_start)) = longest(w, w.len(), PRONOUNS) else {
        return;
    };
    let Some((host, host_start)) = longest(w, pron_start, PRONOUN_HOSTS) else {
        return;
    };
    if host_start < r.rv {
        return;
    }
    match host {
        "iéndo" => replace_tail(w, host_start, "iendo"),
        "ándo" => replace_tail(w, host_start, "ando"),
        "ár" => replace_tail(w, host_start, "ar"),
        "ér" => replace_tail(w, host_start, "er"),
        "ír" => replace_tail(w, host_start, "ir"),
        "yendo" => {
            if host_start > 0 && w[host_start - 1] == 'u' {
                w.truncate(pron_start);
            }
        }
        _ => w.truncate(pron_start),
    }
}

/// Deletes `suffix` from the end if present and starting inside the region.
fn delete_if(w: &mut Vec<char>, suffix: &str, region: usize) -> bool {
    match ends_with_at(w, w.len(), suffix) {
        Some(start) if start >= region => {
            w.truncate(start);
            true
        }
        _ => false,
    }
}

fn standard_suffix(w: &mut Vec<char>, r: &Regions) -> bool {
    let end = w.len();
    let Some((start, action)) = STANDARD
        .iter()
        .filter_map(|&(s, a)| ends_with_at(w, end, s).map(|start| (start, a)))
        .min_by_key(|&(start, _)| start)
    else {
        return false;
    };
    let in_r2 = start >= r.r2;
    match action {
        Standard::Delete if in_r2 => w.truncate(start),
        Standard::DeleteThenIc if in_r2 => {
            w.truncate(start);
            delete_if(w, "ic", r.r2);
        }
        Standard::Log if in_r2 => replace_tail(w, start, "log"),
        Standard::U if in_r2 => replace_tail(w, start, "u"),
        Standard::Ente if in_r2 => replace_tail(w, start, "ente"),
        Standard::Amente if start >= r.r1 => {
            w.truncate(start);
            if let Some((found, s)) = longest(w, w.len(), &["iv", "os", "ic", "ad"]) {
                if s >= r.r2 {
                    w.truncate(s);
                    if found == "iv" {
                        delete_if(w, "at", r.r2);
                    }
                }
            }
        }
        Standard::Mente if in_r2 => {
            w.truncate(start);
            if let Some((_, s)) = longest(w, w.len(), &["ante", "able", "ible"]) {
                if s >= r.r2 {
                    w.truncate(s);
                }
            }
        }
        Standard::Idad if in_r2 => {
            w.truncate(start);
            if let Some((_, s)) = longest(w, w.len(), &["abil", "ic", "iv"]) {
                if s >= r.r2 {
                    w.truncate(s);
                }
            }
        }
        Standard::Iv if in_r2 => {
            w.truncate(start);
            delete_if(w, "at", r.r2);
        }
        _ => return false,
    }
    true
}

/// Longest `list` entry lying entirely inside RV.
fn longest_in_rv<'a>(w: &[char], r: &Regions, list: &[&'a str]) -> Option<(&'a str, usize)> {
    if w.len() < r.rv {
        return None;
    }
    longest(&w[r.rv..], w.len() - r.rv, list).map(|(s, start)| (s, start + r.rv))
}

fn y_verb_suffix(w: &mut Vec<char>, r: &Regions) -> bool {
    match longest_in_rv(w, r, Y_VERB) {
        Some((_, start)) if start > 0 && w[start - 1] == 'u' => {
            w.truncate(start);
            true
        }
        _ => false,
    }
}

fn verb_suffix(w: &mut Vec<char>, r: &Regions) -> bool {
    let Some((suffix, start)) = longest_in_rv(w, r, VERB) else {
        return false;
    };
    if VERB_GU.contains(&suffix) && start >= 2 && w[start - 1] == 'u' && w[start - 2] == 'g' {
        w.truncate(start - 1);
    } else {
        w.truncate(start);
    }
    true
}

fn residual_suffix(w: &mut Vec<char>, r: &Regions) {
    let Some((suffix, start)) = longest(w, w.len(), RESIDUAL) else {
        return;
    };
    if start < r.rv {
        return;
    }
    w.truncate(start);
    if matches!(suffix, "e" | "é")
        && start >= 2
        && w[start - 1] == 'u'
        && w[start - 2] == 'g'
        && start > r.rv
    {
        w.truncate(start - 1);
    }
}

fn strip_acute(c: char) -> char {
    match c {
        'á' => 'a',
        'é' => 'e',
        'í' => 'i',
        'ó' => 'o',
        'ú' => 'u',
        other => other,
    }
}

/// Reduces a lowercase Spanish word to its Snowball stem.
///
/// Words with no applicable suffix come back unchanged apart from the final
/// removal of acute accents.
pub fn stem(word: &str) -> String {
    let mut w: Vec<char> = word.chars().collect();
    let regions = Regions::mark(&w);

    attached_pronoun(&mut w, &regions);
    let _ = standard_suffix(&mut w, &regions)
        || y_verb_suffix(&mut w, &regions)
        || verb_suffix(&mut w, &regions);
    residual_suffix(&mut w, &regions);

    w.into_iter().map(strip_acute).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regions_follow_the_standard_definitions() {
        // Examples from the Snowball Spanish description.
        let w: Vec<char> = "macho".chars().collect();
        assert_eq!(Regions::mark(&w).rv, 3);
        let w: Vec<char> = "oliva".chars().collect();
        assert_eq!(Regions::mark(&w).rv, 3);
        let w: Vec<char> = "trabajo".chars().collect();
        assert_eq!(Regions::mark(&w).rv, 3);
        let w: Vec<char> = "áureo".chars().collect();
        assert_eq!(Regions::mark(&w).rv, 3);
        let w: Vec<char> = "beautiful".chars().collect();
        let r = Regions::mark(&w);
        assert_eq!((r.r1, r.r2), (5, 7));
    }

    #[test]
    fn governor_family_shares_one_root() {
        for word in ["gobernación", "gobernaciones", "gobernador", "gobernadores"] {
            assert_eq!(stem(word), "gobern", "{word}");
        }
    }

    #[test]
    fn short_and_suffixless_words() {
        assert_eq!(stem("sol"), "sol");
        assert_eq!(stem(""), "");
        assert_eq!(stem("a"), "a");
        assert_eq!(stem("de"), "de");
    }

    #[test]
    fn individual_steps() {
        assert_eq!(stem("gracias"), "graci");
        assert_eq!(stem("diciéndole"), "dic");
        assert_eq!(stem("campaña"), "campañ");
        assert_eq!(stem("rápidamente"), "rapid");
        assert_eq!(stem("averigüen"), "averigü");
        assert_eq!(stem("siguen"), "sig");
    }
}
