//! Text normalization helpers shared by selection matching and the store.

/// Normalizes a sentence for equality comparison: lowercases, drops
/// punctuation and symbols, and collapses whitespace runs. `"I love
/// travelling."` and `" i love   Travelling "` compare equal.
pub fn normalize_sentence(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_space = false;
    for c in s.chars() {
        if c.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            for lower in c.to_lowercase() {
                out.push(lower);
            }
        } else {
            // whitespace and punctuation both act as soft separators
            pending_space = true;
        }
    }
    out
}

const HANGUL_S_BASE: u32 = 0xAC00;
const HANGUL_L_BASE: u32 = 0x1100;
const HANGUL_V_BASE: u32 = 0x1161;
const HANGUL_T_BASE: u32 = 0x11A7;
const HANGUL_L_COUNT: u32 = 19;
const HANGUL_V_COUNT: u32 = 21;
const HANGUL_T_COUNT: u32 = 28;
const HANGUL_N_COUNT: u32 = HANGUL_V_COUNT * HANGUL_T_COUNT;
const HANGUL_S_COUNT: u32 = HANGUL_L_COUNT * HANGUL_N_COUNT;

fn is_hangul_l(c: u32) -> bool {
    (HANGUL_L_BASE..HANGUL_L_BASE + HANGUL_L_COUNT).contains(&c)
}

fn is_hangul_v(c: u32) -> bool {
    (HANGUL_V_BASE..HANGUL_V_BASE + HANGUL_V_COUNT).contains(&c)
}

fn is_hangul_t(c: u32) -> bool {
    (HANGUL_T_BASE + 1..HANGUL_T_BASE + HANGUL_T_COUNT).contains(&c)
}

fn is_hangul_lv(c: u32) -> bool {
    (HANGUL_S_BASE..HANGUL_S_BASE + HANGUL_S_COUNT).contains(&c)
        && (c - HANGUL_S_BASE) % HANGUL_T_COUNT == 0
}

/// Composes decomposed Hangul jamo sequences into precomposed syllable
/// blocks (the Korean-relevant part of canonical composition, computed
/// algorithmically). Text written with conjoining jamo then compares
/// equal to its precomposed form, and syllable-level token counts see
/// one grapheme per block. Non-Hangul text passes through untouched.
pub fn compose_hangul(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut last: Option<char> = None;
    for c in s.chars() {
        let cp = c as u32;
        if let Some(prev) = last {
            let p = prev as u32;
            if is_hangul_l(p) && is_hangul_v(cp) {
                let l_index = p - HANGUL_L_BASE;
                let v_index = cp - HANGUL_V_BASE;
                let syllable = HANGUL_S_BASE + (l_index * HANGUL_V_COUNT + v_index) * HANGUL_T_COUNT;
                last = Some(char::from_u32(syllable).expect("valid Hangul syllable"));
                continue;
            }
            if is_hangul_lv(p) && is_hangul_t(cp) {
                let t_index = cp - HANGUL_T_BASE;
                last = Some(char::from_u32(p + t_index).expect("valid Hangul syllable"));
                continue;
            }
            out.push(prev);
        }
        last = Some(c);
    }
    if let Some(prev) = last {
        out.push(prev);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentence_normalization_ignores_case_punctuation_whitespace() {
        assert_eq!(normalize_sentence("I love travelling."), "i love travelling");
        assert_eq!(normalize_sentence("  i LOVE   travelling!!  "), "i love travelling");
        assert_eq!(normalize_sentence("안녕, 하세요?"), "안녕 하세요");
        assert_eq!(normalize_sentence("..."), "");
    }

    #[test]
    fn hangul_composition_builds_syllable_blocks() {
        // ᄒ + ᅡ + ᆫ = 한, ᄀ + ᅳ + ᆯ = 글
        let decomposed = "\u{1112}\u{1161}\u{11AB}\u{1100}\u{1173}\u{11AF}";
        assert_eq!(compose_hangul(decomposed), "한글");
        // LV without trailing consonant
        assert_eq!(compose_hangul("\u{1112}\u{1161}"), "하");
    }

    #[test]
    fn hangul_composition_leaves_other_text_alone() {
        assert_eq!(compose_hangul("hello 안녕"), "hello 안녕");
        assert_eq!(compose_hangul(""), "");
    }
}
