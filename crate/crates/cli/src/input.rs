//! Reading formula files, automaton files, and structure selections.

use mwmso::automata::json::{parse_file, read_raw, RawAutomaton};
use mwmso::automata::Alphabet;
use mwmso::logic::Signature;
use mwmso::structures::StructureSpec;
use mwmso::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

/// A formula file: `#` header lines followed by the formula text.
///
/// ```text
/// # structure: disp(2)
/// # alphabet: ↔ ↕
/// # alias: <-> = ↔, <|> = ↕
/// forall x. ...
/// ```
#[derive(Debug, Clone, Default)]
pub struct FormulaFile {
    pub structure: Option<StructureSpec>,
    pub alphabet: Option<Vec<String>>,
    pub aliases: BTreeMap<String, String>,
    pub body: String,
}

impl FormulaFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = FormulaFile::default();
        let mut body = Vec::new();
        for line in text.lines() {
            let Some(header) = line.trim_start().strip_prefix('#') else {
                body.push(line);
                continue;
            };
            let Some((key, value)) = header.split_once(':') else {
                continue;
            };
            let value = value.trim();
            match key.trim() {
                "structure" => out.structure = Some(value.parse()?),
                "alphabet" => out.alphabet = Some(split_letters(value)),
                "alias" => {
                    for pair in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                        let (alias, letter) = pair
                            .split_once('=')
                            .ok_or_else(|| Error::Usage(format!("alias `{pair}` must read `alias = letter`")))?;
                        out.aliases.insert(alias.trim().to_string(), letter.trim().to_string());
                    }
                }
                _ => {}
            }
        }
        out.body = body.join("\n");
        Ok(out)
    }

    pub fn signature(&self) -> Signature {
        let mut sig = match &self.alphabet {
            Some(letters) => Signature::new(letters.clone()),
            None => Signature::default(),
        };
        for (a, l) in &self.aliases {
            sig = sig.with_alias(a.clone(), l.clone());
        }
        sig
    }
}

/// Letters separated by whitespace or commas.
pub fn split_letters(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn read_formula(path: &Path) -> Result<FormulaFile> {
    FormulaFile::parse(&read_text(path)?)
}

/// An automaton file together with the structure named inside it.
pub struct AutomatonInput {
    pub raw: RawAutomaton,
    pub structure: Option<StructureSpec>,
}

pub fn read_automaton(path: &Path) -> Result<AutomatonInput> {
    let file = parse_file(&read_text(path)?)?;
    let structure = file.structure.as_deref().map(str::parse).transpose()?;
    Ok(AutomatonInput { raw: read_raw(&file)?, structure })
}

/// The flag wins over the file; a disagreement is reported as a warning.
pub fn pick_structure(
    flag: Option<&StructureSpec>,
    file: Option<&StructureSpec>,
    warnings: &mut Vec<String>,
) -> Result<StructureSpec> {
    match (flag, file) {
        (Some(f), Some(h)) if f != h => {
            warnings.push(format!("--structure {f} overrides {h} from the input file"));
            Ok(f.clone())
        }
        (Some(f), _) => Ok(f.clone()),
        (None, Some(h)) => Ok(h.clone()),
        (None, None) => Err(Error::Usage("no structure given; pass --structure or add a header".into())),
    }
}

/// Alphabet from the flag, the header, or the letters of the formula.
pub fn pick_alphabet(
    flag: Option<&str>,
    file: &FormulaFile,
    used: impl IntoIterator<Item = String>,
    warnings: &mut Vec<String>,
) -> Result<Alphabet> {
    let letters = match (flag, &file.alphabet) {
        (Some(f), Some(h)) => {
            let f = split_letters(f);
            if &f != h {
                warnings.push("--alphabet overrides the alphabet header".into());
            }
            f
        }
        (Some(f), None) => split_letters(f),
        (None, Some(h)) => h.clone(),
        (None, None) => used.into_iter().collect(),
    };
    if letters.is_empty() {
        return Err(Error::Usage("empty alphabet; pass --alphabet".into()));
    }
    Alphabet::new(letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_lines() {
        let f = FormulaFile::parse("# structure: disp(2)\n# alphabet: ↔ ↕\n# alias: <-> = ↔, <|> = ↕\nforall x.\n  <1,0>").unwrap();
        assert_eq!(f.structure, Some(StructureSpec::Disp(2)));
        assert_eq!(f.alphabet, Some(vec!["↔".to_string(), "↕".to_string()]));
        assert_eq!(f.aliases.get("<|>").map(String::as_str), Some("↕"));
        assert_eq!(f.body, "forall x.\n  <1,0>");
    }

    #[test]
    fn flag_overrides_with_warning() {
        let mut w = Vec::new();
        let got = pick_structure(Some(&StructureSpec::Ratio), Some(&StructureSpec::Disp(2)), &mut w).unwrap();
        assert_eq!(got, StructureSpec::Ratio);
        assert_eq!(w.len(), 1);
        assert!(pick_structure(None, None, &mut w).is_err());
    }
}
