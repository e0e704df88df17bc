#!/usr/bin/env python3
"""Reference tokenizer used to freeze string_to_set golden cases.

Implements the tokenization pipeline independently of the Rust code:
punctuation-to-space replacement, lowercasing, whitespace splitting,
token-length filtering, set construction. Run from this directory to
regenerate string_to_set_cases.json.
"""

import json


def string_to_set(text, punctuation=".,?!", lowercase=True, min_token_len=3,
                  length_filter="keep-longer", normalize=True):
    if normalize:
        for ch in punctuation:
            text = text.replace(ch, " ")
        if lowercase:
            text = text.lower()
    tokens = text.split()
    if length_filter == "keep-longer":
        tokens = [t for t in tokens if len(t) > min_token_len]
    elif length_filter == "keep-at-most":
        tokens = [t for t in tokens if len(t) <= min_token_len]
    else:
        raise ValueError(length_filter)
    return sorted(set(tokens))


CASES = []


def case(name, text, **config):
    cfg = {
        "punctuation": config.get("punctuation", ".,?!"),
        "lowercase": config.get("lowercase", True),
        "min_token_len": config.get("min_token_len", 3),
        "length_filter": config.get("length_filter", "keep-longer"),
        "normalize": config.get("normalize", True),
    }
    CASES.append({
        "name": name,
        "text": text,
        "config": cfg,
        "expected": string_to_set(text, cfg["punctuation"], cfg["lowercase"],
                                  cfg["min_token_len"], cfg["length_filter"],
                                  cfg["normalize"]),
    })


# Defaults on plain English.
case("defaults_hello_world", "Hello, world! Hi.")
case("defaults_sentence", "The quick brown fox jumps over the lazy dog.")
case("defaults_question", "Where is the nearest train station? Over there!")
case("defaults_repeats", "data data Data DATA data.")
case("defaults_short_tokens_dropped", "a an the cat dog bird elephant")
case("defaults_numbers", "In 2023, 1234 people visited 56 museums.")
case("defaults_hyphen_kept", "state-of-the-art results, well-known baseline.")
case("defaults_apostrophe", "Don't stop. It's fine, isn't it?")
case("defaults_punct_runs", "wait... what?! really?? yes!!")
case("defaults_leading_trailing_space", "   padded   text   here   ")

# Length threshold grid, keep-longer.
SENT = "a bb ccc dddd eeeee ffffff ggggggg tenletters elevenchars."
case("keep_longer_n0", SENT, min_token_len=0)
case("keep_longer_n1", SENT, min_token_len=1)
case("keep_longer_n2", SENT, min_token_len=2)
case("keep_longer_n3", SENT, min_token_len=3)
case("keep_longer_n4", SENT, min_token_len=4)
case("keep_longer_n10", SENT, min_token_len=10)
case("keep_longer_boundary_exact", "abc abcd", min_token_len=3)
case("keep_longer_all_filtered", "to be or not to be", min_token_len=3)

# Keep-at-most variants.
case("keep_at_most_n3", SENT, min_token_len=3, length_filter="keep-at-most")
case("keep_at_most_n0", "x yy zzz", min_token_len=0, length_filter="keep-at-most")
case("keep_at_most_n2", "go in out over under", min_token_len=2, length_filter="keep-at-most")
case("keep_at_most_boundary", "abc abcd ab", min_token_len=3, length_filter="keep-at-most")

# Split-only (no normalization).
case("split_only_n3", "Hello, world! Hi.", normalize=False)
case("split_only_n0", "Hello, world! Hi.", min_token_len=0, normalize=False)
case("split_only_case_kept", "CamelCase UPPER lower MiXeD", normalize=False)
case("split_only_punct_kept", "end. stop? bang! comma,", min_token_len=0, normalize=False)
case("split_only_at_most", "a bb ccc<dddd eeee", min_token_len=3,
     length_filter="keep-at-most", normalize=False)

# Normalize without lowercasing.
case("no_lowercase_punct_replaced", "Berlin, Paris! ROME?", lowercase=False)
case("no_lowercase_dedup_case_sensitive", "Test test TEST testing", lowercase=False, min_token_len=0)

# Custom punctuation sets.
case("custom_punct_semicolon_colon", "alpha;beta:gamma,delta", punctuation=";:")
case("custom_punct_empty", "one.two,three!four?", punctuation="")
case("custom_punct_digits", "abc1def2ghi", punctuation="12", min_token_len=2)

# Unicode: accents, case, combining marks.
case("unicode_accents", "Café Müller naïve façade résumé.")
case("unicode_accents_short", "île été eau", min_token_len=2)
case("unicode_combining_mark", "café latte", min_token_len=3)
case("unicode_turkish_dotted_I", "İstanbul Iık", min_token_len=0)
case("unicode_german_sharp_s", "Straße STRASSE grüße")
case("unicode_greek", "ΑΘΗΝΑ αθηνα Αθηνα", min_token_len=2)
case("unicode_cyrillic", "Москва МОСКВА москва.")

# Unicode: multilingual corpora samples.
case("kinyarwanda_like", "Abana barakina umupira mu kibuga, abandi barareba.")
case("swahili_like", "Habari za asubuhi? Watoto wanasoma shule leo!")
case("filipino_like", "Ang mga bata ay naglalaro sa parke, masaya sila.")
case("cjk_ideographic_space", "東京　大阪　名古屋です", min_token_len=1)
case("emoji_tokens", "great day 🦀🦀🦀 fun", min_token_len=2)
case("emoji_length_counts_scalars", "🦀 🦀🦀 🦀🦀🦀", min_token_len=1,
     length_filter="keep-at-most")

# Whitespace handling.
case("whitespace_tabs_newlines", "alpha\tbeta\ngamma\r\ndelta\r epsilon")
case("whitespace_nbsp", "left right middle", min_token_len=3)
case("whitespace_en_em_space", "one two three", min_token_len=2)
case("whitespace_line_paragraph_sep", "first second third")
case("whitespace_vertical_form_feed", "up\x0bdown\x0cacross", min_token_len=1)

# Degenerate inputs.
case("empty_string", "")
case("whitespace_only", " \t \n \r\n ")
case("punctuation_only", ".,?! .. !!", min_token_len=0)
case("single_long_token", "supercalifragilisticexpialidocious")
case("punct_glued_tokens", "one.two.three,four", min_token_len=2)
case("single_char_repeated", "a a a a a", min_token_len=0)

with open("string_to_set_cases.json", "w", encoding="utf-8") as fh:
    json.dump({"cases": CASES}, fh, ensure_ascii=False, indent=1)
    fh.write("\n")

print(f"wrote {len(CASES)} cases")
