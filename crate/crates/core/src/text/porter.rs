//! The original (1980) Porter suffix-stripping algorithm.
//!
//! Words are processed as ASCII byte strings. Anything that is not made of
//! lowercase ASCII letters is returned unchanged. No length guard is applied,
//! so two-letter words go through the rules like any other word
//! (`"is"` stems to `"i"`).

/// Stems a single lowercase word.
pub fn porter_stem(word: &str) -> String {
    if word.is_empty() || !word.bytes().all(|c| c.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut w = Word(word.as_bytes().to_vec());
    w.step1a();
    w.step1b();
    w.step1c();
    w.step2();
    w.step3();
    w.step4();
    w.step5a();
    w.step5b();
    // only ASCII bytes were ever written
    String::from_utf8(w.0).expect("ascii")
}

enum Cond {
    Always,
    MeasureAbove(usize),
    /// m > 1 and the stem ends in `s` or `t`.
    IonStem,
}

struct Word(Vec<u8>);

impl Word {
    fn is_consonant(&self, i: usize) -> bool {
        match self.0[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// m in `[C](VC)^m[V]`, over the first `len` letters.
    fn measure(&self, len: usize) -> usize {
        let mut m = 0;
        let mut i = 0;
        while i < len && self.is_consonant(i) {
            i += 1;
        }
        loop {
            while i < len && !self.is_consonant(i) {
                i += 1;
            }
            if i >= len {
                return m;
            }
            while i < len && self.is_consonant(i) {
                i += 1;
            }
            m += 1;
        }
    }

    fn has_vowel(&self, len: usize) -> bool {
        (0..len).any(|i| !self.is_consonant(i))
    }

    fn ends_double_consonant(&self, len: usize) -> bool {
        len >= 2 && self.0[len - 1] == self.0[len - 2] && self.is_consonant(len - 1)
    }

    /// `*o`: the first `len` letters end consonant-vowel-consonant and the
    /// final consonant is not w, x or y.
    fn ends_cvc(&self, len: usize) -> bool {
        len >= 3
            && self.is_consonant(len - 3)
            && !self.is_consonant(len - 2)
            && self.is_consonant(len - 1)
            && !matches!(self.0[len - 1], b'w' | b'x' | b'y')
    }

    fn ends_with(&self, suffix: &str) -> bool {
        self.0.ends_with(suffix.as_bytes())
    }

    fn replace_suffix(&mut self, suffix_len: usize, replacement: &str) {
        let keep = self.0.len() - suffix_len;
        self.0.truncate(keep);
        self.0.extend_from_slice(replacement.as_bytes());
    }

    /// Applies the first rule whose suffix matches, if its condition holds.
    /// Rules are listed so the longest matching suffix comes first.
    fn apply_rules(&mut self, rules: &[(&str, &str)], cond: Cond) -> bool {
        let Some(&(suffix, replacement)) = rules.iter().find(|(s, _)| self.ends_with(s)) else {
            return false;
        };
        let stem_len = self.0.len() - suffix.len();
        let ok = match cond {
            Cond::Always => true,
            Cond::MeasureAbove(n) => self.measure(stem_len) > n,
            Cond::IonStem => {
                self.measure(stem_len) > 1 && stem_len > 0 && matches!(self.0[stem_len - 1], b's' | b't')
            }
        };
        if ok {
            self.replace_suffix(suffix.len(), replacement);
        }
        ok
    }

    fn step1a(&mut self) {
        self.apply_rules(
            &[("sses", "ss"), ("ies", "i"), ("ss", "ss"), ("s", "")],
            Cond::Always,
        );
    }

    fn step1b(&mut self) {
        if self.ends_with("eed") {
            self.apply_rules(&[("eed", "ee")], Cond::MeasureAbove(0));
            return;
        }
        let suffix_len = if self.ends_with("ed") {
            2
        } else if self.ends_with("ing") {
            3
        } else {
            return;
        };
        let stem_len = self.0.len() - suffix_len;
        if !self.has_vowel(stem_len) {
            return;
        }
        self.0.truncate(stem_len);

        if self.ends_with("at") || self.ends_with("bl") || self.ends_with("iz") {
            self.0.push(b'e');
        } else if self.ends_double_consonant(stem_len) && !matches!(self.0[stem_len - 1], b'l' | b's' | b'z')
        {
            self.0.pop();
        } else if self.measure(stem_len) == 1 && self.ends_cvc(stem_len) {
            self.0.push(b'e');
        }
    }

    fn step1c(&mut self) {
        let len = self.0.len();
        if self.ends_with("y") && self.has_vowel(len - 1) {
            self.0[len - 1] = b'i';
        }
    }

    fn step2(&mut self) {
        self.apply_rules(
            &[
                ("ational", "ate"),
                ("tional", "tion"),
                ("enci", "ence"),
                ("anci", "ance"),
                ("izer", "ize"),
                ("abli", "able"),
                ("alli", "al"),
                ("entli", "ent"),
                ("eli", "e"),
                ("ousli", "ous"),
                ("ization", "ize"),
                ("ation", "ate"),
                ("ator", "ate"),
                ("alism", "al"),
                ("iveness", "ive"),
                ("fulness", "ful"),
                ("ousness", "ous"),
                ("aliti", "al"),
                ("iviti", "ive"),
                ("biliti", "ble"),
            ],
            Cond::MeasureAbove(0),
        );
    }

    fn step3(&mut self) {
        self.apply_rules(
            &[
                ("icate", "ic"),
                ("ative", ""),
                ("alize", "al"),
                ("iciti", "ic"),
                ("ical", "ic"),
                ("ful", ""),
                ("ness", ""),
            ],
            Cond::MeasureAbove(0),
        );
    }

    fn step4(&mut self) {
        if self.ends_with("ion") {
            self.apply_rules(&[("ion", "")], Cond::IonStem);
            return;
        }
        self.apply_rules(
            &[
                ("al", ""),
                ("ance", ""),
                ("ence", ""),
                ("er", ""),
                ("ic", ""),
                ("able", ""),
                ("ible", ""),
                ("ant", ""),
                ("ement", ""),
                ("ment", ""),
                ("ent", ""),
                ("ou", ""),
                ("ism", ""),
                ("ate", ""),
                ("iti", ""),
                ("ous", ""),
                ("ive", ""),
                ("ize", ""),
            ],
            Cond::MeasureAbove(1),
        );
    }

    fn step5a(&mut self) {
        if !self.ends_with("e") {
            return;
        }
        let stem_len = self.0.len() - 1;
        let m = self.measure(stem_len);
        if m > 1 || (m == 1 && !self.ends_cvc(stem_len)) {
            self.0.pop();
        }
    }

    fn step5b(&mut self) {
        let len = self.0.len();
        if self.ends_with("l") && self.ends_double_consonant(len) && self.measure(len) > 1 {
            self.0.pop();
        }
    }
}
