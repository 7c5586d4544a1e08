//! Word syntax: letters `L<id>` and `X<i>` joined by `⊗` (or `*`), `1` for the empty word.

use anyhow::{anyhow, bail, Result};
use arbor_core::word::{Letter, Word};

pub fn parse_word(text: &str) -> Result<Word<Letter>> {
    let text = text.trim();
    if text == "1" {
        return Ok(Word::empty());
    }
    let mut out = Vec::new();
    for part in text.split(['⊗', '*']) {
        let part = part.trim();
        let (head, num) = part.split_at(part.char_indices().nth(1).map(|(i, _)| i).unwrap_or(part.len()));
        let n = || num.parse::<u32>().map_err(|_| anyhow!("bad letter {part:?}"));
        out.push(match head {
            "L" => Letter::L(n()?),
            "X" => Letter::X(u8::try_from(n()?).map_err(|_| anyhow!("bad letter {part:?}"))?),
            _ => bail!("bad letter {part:?}: expected L<id> or X<i>"),
        });
    }
    Ok(Word(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let w = parse_word("L1 ⊗ L12 ⊗ X0").unwrap();
        assert_eq!(w, Word(vec![Letter::L(1), Letter::L(12), Letter::X(0)]));
        assert_eq!(w.to_string(), "L1 ⊗ L12 ⊗ X0");
        assert_eq!(parse_word("X1*L0").unwrap(), Word(vec![Letter::X(1), Letter::L(0)]));
        assert_eq!(parse_word(" 1 ").unwrap(), Word::empty());
        assert!(parse_word("L").is_err());
        assert!(parse_word("Y2").is_err());
        assert!(parse_word("X300").is_err());
    }
}
