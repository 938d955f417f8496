//! Reader and writer for the unified evaluation corpus XML layout.
//!
//! The reader is a restricted hand-rolled scanner for exactly the elements
//! `corpus`, `text`, `sentence`, `wf`, and `instance`; there is no support
//! for namespaces, CDATA, or comments. The writer produces a canonical byte
//! layout so that write-parse-write is byte-stable.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{read_input, write_output, Error, Result};

use super::{Corpus, Document, Sentence, Token};

pub fn parse_unified_corpus(path: &Path) -> Result<Corpus> {
    let text = read_input(path)?;
    parse_unified_corpus_str(&text)
        .map_err(|e| match e {
            Error::Data(msg) => Error::data(format!("{}: {}", path.display(), msg)),
            other => other,
        })
}

/// Parses corpus XML from an in-memory string.
pub fn parse_unified_corpus_str(text: &str) -> Result<Corpus> {
    let mut scanner = Scanner::new(text.strip_prefix('\u{feff}').unwrap_or(text));
    scanner.skip_prolog()?;
    let corpus_tag = scanner.expect_open("corpus")?;
    let _ = corpus_tag;
    let mut documents = Vec::new();
    loop {
        scanner.skip_ws();
        if scanner.try_close("corpus")? {
            break;
        }
        let attrs = scanner.expect_open("text")?;
        documents.push(parse_text(&mut scanner, attrs)?);
    }
    scanner.skip_ws();
    if !scanner.at_end() {
        return Err(scanner.err("trailing content after </corpus>"));
    }
    Corpus::from_documents(documents)
}

fn parse_text(scanner: &mut Scanner<'_>, attrs: HashMap<String, String>) -> Result<Document> {
    let id = attrs
        .get("id")
        .cloned()
        .ok_or_else(|| scanner.err("text element is missing its id attribute"))?;
    let mut sentences = Vec::new();
    loop {
        scanner.skip_ws();
        if scanner.try_close("text")? {
            break;
        }
        let attrs = scanner.expect_open("sentence")?;
        sentences.push(parse_sentence(scanner, attrs)?);
    }
    Ok(Document { id, sentences })
}

fn parse_sentence(
    scanner: &mut Scanner<'_>,
    attrs: HashMap<String, String>,
) -> Result<Sentence> {
    let id = attrs
        .get("id")
        .cloned()
        .ok_or_else(|| scanner.err("sentence element is missing its id attribute"))?;
    let mut tokens = Vec::new();
    loop {
        scanner.skip_ws();
        if scanner.try_close("sentence")? {
            break;
        }
        let (name, attrs) = scanner.open_tag()?;
        let is_instance = match name.as_str() {
            "wf" => false,
            "instance" => true,
            other => return Err(scanner.err(&format!("unknown element <{}>", other))),
        };
        let surface = scanner.char_data()?;
        scanner.expect_close(&name)?;
        let instance_id = if is_instance {
            let id = attrs
                .get("id")
                .cloned()
                .ok_or_else(|| scanner.err("instance element is missing its id attribute"))?;
            if !attrs.contains_key("lemma") || !attrs.contains_key("pos") {
                return Err(Error::data(format!(
                    "instance {} is missing a lemma or part of speech",
                    id
                )));
            }
            Some(id)
        } else {
            None
        };
        tokens.push(Token {
            surface,
            lemma: attrs.get("lemma").map(|l| l.to_lowercase()),
            pos: attrs.get("pos").cloned(),
            instance_id,
        });
    }
    Ok(Sentence { id, tokens })
}

// ===== scanner =====

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Scanner<'a> {
        Scanner { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn line(&self) -> usize {
        self.text[..self.pos].bytes().filter(|b| *b == b'\n').count() + 1
    }

    fn err(&self, msg: &str) -> Error {
        Error::data(format!("line {}: {}", self.line(), msg))
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    fn skip_prolog(&mut self) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with("<?") {
            match self.rest().find("?>") {
                Some(i) => self.pos += i + 2,
                None => return Err(self.err("unterminated XML declaration")),
            }
            self.skip_ws();
        }
        Ok(())
    }

    /// Consumes `<name ...>` for the given element name.
    fn expect_open(&mut self, name: &str) -> Result<HashMap<String, String>> {
        let (found, attrs) = self.open_tag()?;
        if found != name {
            return Err(self.err(&format!("expected <{}>, found <{}>", name, found)));
        }
        Ok(attrs)
    }

    fn open_tag(&mut self) -> Result<(String, HashMap<String, String>)> {
        if !self.rest().starts_with('<') {
            return Err(self.err("expected an element start"));
        }
        if self.rest().starts_with("</") {
            let upto = self.rest().find('>').map(|i| &self.rest()[..=i]);
            return Err(self.err(&format!(
                "unexpected closing tag {}",
                upto.unwrap_or("</...")
            )));
        }
        self.pos += 1;
        let name = self.tag_name()?;
        let mut attrs = HashMap::new();
        loop {
            self.skip_ws();
            if self.rest().starts_with("/>") {
                return Err(self.err(&format!("element <{}> must not self-close", name)));
            }
            if self.rest().starts_with('>') {
                self.pos += 1;
                return Ok((name, attrs));
            }
            let key = self.attr_name()?;
            if !self.rest().starts_with("=\"") {
                return Err(self.err(&format!("attribute {} is missing =\"...\"", key)));
            }
            self.pos += 2;
            let end = self
                .rest()
                .find('"')
                .ok_or_else(|| self.err("unterminated attribute value"))?;
            let raw = &self.rest()[..end];
            attrs.insert(key, decode_entities(raw).map_err(|m| self.err(&m))?);
            self.pos += end + 1;
        }
    }

    fn tag_name(&mut self) -> Result<String> {
        let rest = self.rest();
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '>' || c == '/')
            .ok_or_else(|| self.err("unterminated tag"))?;
        if len == 0 {
            return Err(self.err("empty tag name"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn attr_name(&mut self) -> Result<String> {
        let rest = self.rest();
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '=' || c == '>')
            .ok_or_else(|| self.err("unterminated attribute"))?;
        if len == 0 {
            return Err(self.err("malformed attribute"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    /// Consumes `</name>` if it is next; leaves the scanner alone otherwise.
    fn try_close(&mut self, name: &str) -> Result<bool> {
        let closing = format!("</{}>", name);
        if self.rest().starts_with(&closing) {
            self.pos += closing.len();
            return Ok(true);
        }
        if self.at_end() {
            return Err(self.err(&format!("missing {}", closing)));
        }
        Ok(false)
    }

    fn expect_close(&mut self, name: &str) -> Result<()> {
        if self.try_close(name)? {
            Ok(())
        } else {
            Err(self.err(&format!("expected </{}>", name)))
        }
    }

    /// Character data up to the next `<`, with entities decoded.
    fn char_data(&mut self) -> Result<String> {
        let end = self
            .rest()
            .find('<')
            .ok_or_else(|| self.err("unterminated element content"))?;
        let raw = &self.rest()[..end];
        self.pos += end;
        decode_entities(raw).map_err(|m| self.err(&m))
    }
}

fn decode_entities(raw: &str) -> std::result::Result<String, String> {
    if !raw.contains('&') {
        return Ok(raw.to_string());
    }
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(i) = rest.find('&') {
        out.push_str(&rest[..i]);
        rest = &rest[i..];
        let end = rest
            .find(';')
            .ok_or_else(|| format!("unterminated entity in {:?}", raw))?;
        let entity = &rest[1..end];
        match entity {
            "amp" => out.push('&'),
            "lt" => out.push('<'),
            "gt" => out.push('>'),
            "quot" => out.push('"'),
            "apos" => out.push('\''),
            _ => {
                let code = entity
                    .strip_prefix("#x")
                    .map(|h| u32::from_str_radix(h, 16))
                    .or_else(|| entity.strip_prefix('#').map(str::parse))
                    .transpose()
                    .ok()
                    .flatten()
                    .ok_or_else(|| format!("unknown entity &{};", entity))?;
                out.push(
                    char::from_u32(code)
                        .ok_or_else(|| format!("entity &{}; is not a character", entity))?,
                );
            }
        }
        rest = &rest[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

// ===== writer =====

/// Renders the corpus in the canonical layout used by `write_unified_corpus`.
pub fn unified_corpus_to_string(corpus: &Corpus) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\" ?>\n<corpus>\n");
    for doc in corpus.documents() {
        out.push_str(&format!("<text id=\"{}\">\n", escape_attr(&doc.id)));
        for sentence in &doc.sentences {
            out.push_str(&format!("<sentence id=\"{}\">\n", escape_attr(&sentence.id)));
            for token in &sentence.tokens {
                render_token(&mut out, token);
            }
            out.push_str("</sentence>\n");
        }
        out.push_str("</text>\n");
    }
    out.push_str("</corpus>\n");
    out
}

fn render_token(out: &mut String, token: &Token) {
    let name = if token.instance_id.is_some() { "instance" } else { "wf" };
    out.push('<');
    out.push_str(name);
    if let Some(id) = &token.instance_id {
        out.push_str(&format!(" id=\"{}\"", escape_attr(id)));
    }
    if let Some(lemma) = &token.lemma {
        out.push_str(&format!(" lemma=\"{}\"", escape_attr(lemma)));
    }
    if let Some(pos) = &token.pos {
        out.push_str(&format!(" pos=\"{}\"", escape_attr(pos)));
    }
    out.push('>');
    out.push_str(&escape_text(&token.surface));
    out.push_str(&format!("</{}>\n", name));
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn escape_attr(s: &str) -> String {
    escape_text(s).replace('"', "&quot;")
}

pub fn write_unified_corpus(corpus: &Corpus, path: &Path) -> Result<()> {
    write_output(path, unified_corpus_to_string(corpus).as_bytes())
}
