//! A CLI session: the fixed alphabet, the predicate registry, and the named
//! objects loaded from files, with cross-file consistency checks.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use wordlogic::colouring::Colouring;
use wordlogic::formula::PredRegistry;
use wordlogic::pseudofinite::GeneralizedWord;
use wordlogic::recogniser::{FnOracle, MembershipOracle, Recogniser};
use wordlogic::rewrite::{RewriteChain, RewriteStep};
use wordlogic::words::{Alphabet, Word};

#[derive(Default)]
pub struct Session {
    alphabet: Option<Alphabet>,
    pub registry: PredRegistry,
    recognisers: BTreeMap<String, Recogniser>,
    generalized: BTreeMap<String, GeneralizedWord>,
}

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    /// Fixes the session alphabet; later declarations must agree.
    pub fn declare_alphabet(&mut self, alphabet: Alphabet) -> Result<()> {
        match &self.alphabet {
            None => {
                self.alphabet = Some(alphabet);
                Ok(())
            }
            Some(existing) if *existing == alphabet => Ok(()),
            Some(existing) => bail!(
                "alphabet `{alphabet}` conflicts with the session alphabet `{existing}`"
            ),
        }
    }

    pub fn declare_alphabet_str(&mut self, text: &str) -> Result<()> {
        let alphabet = Alphabet::parse(text).with_context(|| format!("alphabet `{text}`"))?;
        self.declare_alphabet(alphabet)
    }

    pub fn alphabet(&self) -> Result<&Alphabet> {
        self.alphabet
            .as_ref()
            .ok_or_else(|| anyhow!("no alphabet declared (use --alphabet or a file that declares one)"))
    }

    /// Loads a registry file, merging its alphabet declaration into the session.
    pub fn load_registry(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading registry file {}", path.display()))?;
        let file = PredRegistry::parse_file(&text)
            .with_context(|| format!("registry file {}", path.display()))?;
        if let Some(alphabet) = file.alphabet {
            self.declare_alphabet(alphabet)?;
        }
        self.registry = file.registry;
        Ok(())
    }

    /// Loads and names a recogniser, enforcing the session alphabet.
    pub fn load_recogniser(&mut self, path: &Path) -> Result<&Recogniser> {
        let name = path.display().to_string();
        if !self.recognisers.contains_key(&name) {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading recogniser file {}", path.display()))?;
            let r = Recogniser::from_file_str(&text)
                .with_context(|| format!("recogniser file {}", path.display()))?;
            self.declare_alphabet(r.alphabet().clone())?;
            self.recognisers.insert(name.clone(), r);
        }
        Ok(&self.recognisers[&name])
    }

    /// Loads and names a generalized word; fixes the alphabet from its lines.
    pub fn load_generalized(&mut self, path: &Path) -> Result<&GeneralizedWord> {
        let name = path.display().to_string();
        if !self.generalized.contains_key(&name) {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading generalized word file {}", path.display()))?;
            let g = GeneralizedWord::from_file_str(&text)
                .with_context(|| format!("generalized word file {}", path.display()))?;
            self.declare_alphabet(g.alphabet().clone())?;
            self.generalized.insert(name.clone(), g);
        }
        Ok(&self.generalized[&name])
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let alphabet = self.alphabet()?;
        Word::parse(text, alphabet).with_context(|| format!("word `{text}`"))
    }

    pub fn parse_colouring(&self, text: &str) -> Result<Colouring> {
        Colouring::parse(text).with_context(|| format!("colouring `{text}`"))
    }

    /// Resolves an oracle spec: a builtin (`all`, `empty`, `factor:<word>`,
    /// `parity:<letter>`) or a recogniser file path.
    pub fn resolve_oracle(&mut self, spec: &str) -> Result<Box<dyn MembershipOracle>> {
        match spec {
            "all" => return Ok(Box::new(FnOracle(|_: &Word| true))),
            "empty" => return Ok(Box::new(FnOracle(|_: &Word| false))),
            _ => {}
        }
        if let Some(factor) = spec.strip_prefix("factor:") {
            let f = self.parse_word(factor)?;
            let letters = f.letters().to_vec();
            return Ok(Box::new(FnOracle(move |w: &Word| {
                if letters.is_empty() {
                    return true;
                }
                w.letters().windows(letters.len()).any(|win| win == letters.as_slice())
            })));
        }
        if let Some(letter) = spec.strip_prefix("parity:") {
            let mut chars = letter.chars();
            let c = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => bail!("`parity:` expects a single letter, got `{letter}`"),
            };
            if !self.alphabet()?.contains(c) {
                bail!("letter `{c}` is not in the alphabet");
            }
            return Ok(Box::new(FnOracle(move |w: &Word| w.positions_of(c).count() % 2 == 0)));
        }
        let r = self.load_recogniser(Path::new(spec))?;
        Ok(Box::new(r.clone()))
    }

    /// Writes a chain file: alphabet, colouring, endpoints, one step per line.
    pub fn chain_to_string(&self, chain: &RewriteChain) -> Result<String> {
        let alphabet = self.alphabet()?;
        let mut out = String::new();
        out.push_str(&format!("alphabet {alphabet}\n"));
        out.push_str(&format!("colouring {}\n", chain.colouring));
        out.push_str(&format!("from {}\n", chain.source));
        out.push_str(&format!("to {}\n", chain.target));
        for step in &chain.steps {
            out.push_str(&format!("{step}\n"));
        }
        Ok(out)
    }

    /// Parses a chain file written by [`Session::chain_to_string`].
    pub fn parse_chain(&mut self, text: &str) -> Result<RewriteChain> {
        let mut colouring = None;
        let mut from = None;
        let mut to = None;
        let mut steps = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("alphabet ") {
                self.declare_alphabet_str(rest.trim())
                    .with_context(|| format!("chain file line {line}"))?;
            } else if let Some(rest) = trimmed.strip_prefix("colouring ") {
                colouring = Some(
                    self.parse_colouring(rest.trim())
                        .with_context(|| format!("chain file line {line}"))?,
                );
            } else if trimmed == "from" || trimmed.starts_with("from ") {
                let rest = trimmed.strip_prefix("from").unwrap_or_default();
                from = Some(
                    self.parse_word(rest.trim())
                        .with_context(|| format!("chain file line {line}"))?,
                );
            } else if trimmed == "to" || trimmed.starts_with("to ") {
                let rest = trimmed.strip_prefix("to").unwrap_or_default();
                to = Some(
                    self.parse_word(rest.trim())
                        .with_context(|| format!("chain file line {line}"))?,
                );
            } else {
                let step = RewriteStep::parse(trimmed)
                    .with_context(|| format!("chain file line {line}"))?;
                steps.push(step);
            }
        }
        Ok(RewriteChain {
            source: from.ok_or_else(|| anyhow!("chain file is missing a `from` line"))?,
            target: to.ok_or_else(|| anyhow!("chain file is missing a `to` line"))?,
            colouring: colouring
                .ok_or_else(|| anyhow!("chain file is missing a `colouring` line"))?,
            steps,
        })
    }
}
