use alloc::string::String;
use alloc::vec::Vec;

/// Letters kept by [`clean_text`] after lowercasing.
pub fn is_spanish_letter(c: char) -> bool {
    c.is_ascii_lowercase() || matches!(c, 'á' | 'é' | 'í' | 'ó' | 'ú' | 'ü' | 'ñ')
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Folds a base letter and a following combining mark into the precomposed
/// Spanish letter, so decomposed input keeps its accents.
fn compose(base: char, mark: char) -> Option<char> {
    let composed = match (base, mark) {
        ('a', '\u{301}') => 'á',
        ('e', '\u{301}') => 'é',
        ('i', '\u{301}') => 'í',
        ('o', '\u{301}') => 'ó',
        ('u', '\u{301}') => 'ú',
        ('u', '\u{308}') => 'ü',
        ('n', '\u{303}') => 'ñ',
        ('A', '\u{301}') => 'Á',
        ('E', '\u{301}') => 'É',
        ('I', '\u{301}') => 'Í',
        ('O', '\u{301}') => 'Ó',
        ('U', '\u{301}') => 'Ú',
        ('U', '\u{308}') => 'Ü',
        ('N', '\u{303}') => 'Ñ',
        _ => return None,
    };
    Some(composed)
}

fn starts_with_ci(chars: &[char], at: usize, prefix: &str) -> bool {
    let mut i = at;
    for p in prefix.chars() {
        match chars.get(i) {
            Some(c) if c.to_ascii_lowercase() == p => i += 1,
            _ => return false,
        }
    }
    true
}

/// Length of an HTML tag starting at `at` (which holds `<`), if there is one.
fn tag_len(chars: &[char], at: usize) -> Option<usize> {
    let mut i = at + 1;
    if chars.get(i) == Some(&'/') {
        i += 1;
    }
    match chars.get(i) {
        Some(c) if c.is_ascii_alphabetic() || *c == '!' => {}
        _ => return None,
    }
    while let Some(&c) = chars.get(i) {
        match c {
            '>' => return Some(i + 1 - at),
            '<' => return None,
            _ => i += 1,
        }
    }
    None
}

/// Length of an HTML entity (`&amp;`, `&#241;`, `&#xF1;`) starting at `at`.
fn entity_len(chars: &[char], at: usize) -> Option<usize> {
    let mut i = at + 1;
    let numeric = chars.get(i) == Some(&'#');
    if numeric {
        i += 1;
        if matches!(chars.get(i), Some('x') | Some('X')) {
            i += 1;
        }
    }
    let body_start = i;
    while let Some(&c) = chars.get(i) {
        if c == ';' {
            let body = i - body_start;
            return (body > 0 && body <= 32).then_some(i + 1 - at);
        }
        if !c.is_ascii_alphanumeric() {
            return None;
        }
        i += 1;
    }
    None
}

/// Strips markup and social-media noise from raw tweet text.
///
/// HTML tags and entities, URLs, and whole `@mention` / `#hashtag` tokens are
/// removed; digits are dropped; anything else that is not a Spanish letter
/// becomes a word break. Letters are lowercased with their accents intact and
/// whitespace runs collapse to a single space, so the output is idempotent.
pub fn clean_text(raw: &str) -> String {
    let chars: Vec<char> = raw.chars().collect();
    let mut out = String::with_capacity(raw.len());
    // A break is only emitted once a later letter arrives, which trims and
    // collapses whitespace in one go.
    let mut pending_space = false;
    let push_break = |out: &String, pending: &mut bool| {
        if !out.is_empty() {
            *pending = true;
        }
    };

    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let boundary = i == 0 || !is_word_char(chars[i - 1]);

        if c == '<' {
            if let Some(len) = tag_len(&chars, i) {
                i += len;
                push_break(&out, &mut pending_space);
                continue;
            }
        }
        if c == '&' {
            if let Some(len) = entity_len(&chars, i) {
                i += len;
                push_break(&out, &mut pending_space);
                continue;
            }
        }
        if boundary
            && (starts_with_ci(&chars, i, "http://")
                || starts_with_ci(&chars, i, "https://")
                || starts_with_ci(&chars, i, "www."))
        {
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            push_break(&out, &mut pending_space);
            continue;
        }
        if c == '@' || c == '#' {
            i += 1;
            while i < chars.len() && is_word_char(chars[i]) {
                i += 1;
            }
            push_break(&out, &mut pending_space);
            continue;
        }

        let letter = match chars.get(i + 1).and_then(|&m| compose(c, m)) {
            Some(composed) => {
                i += 1;
                composed
            }
            None => c,
        };
        i += 1;

        if letter.is_numeric() {
            continue;
        }
        let mut lowered = letter.to_lowercase();
        let lower = lowered.next().unwrap_or(letter);
        if lowered.next().is_none() && is_spanish_letter(lower) {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(lower);
        } else {
            push_break(&out, &mut pending_space);
        }
    }
    out
}

/// Splits cleaned text on whitespace, dropping tokens shorter than
/// `min_len` characters.
pub fn tokenize(cleaned: &str, min_len: usize) -> Vec<String> {
    cleaned
        .split_whitespace()
        .filter(|t| t.chars().count() >= min_len)
        .map(String::from)
        .collect()
}
