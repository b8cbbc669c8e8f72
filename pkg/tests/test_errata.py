from numcalc.errata import GENERATED, drift, generate, ledger_text, section


def test_generated_blocks_current():
    assert drift() == []


def test_sections_match_reports():
    text = ledger_text()
    for name in GENERATED:
        assert section(text, name) == generate(name)


def test_hand_notes_present():
    text = ledger_text()
    assert "`[[1+1]+[1+1+1]]`" in text and "5/2" in text
    assert "assoc-mixed" in text
    assert "Q.div-assoc" in text


def test_failures_show_instances():
    text = ledger_text()
    for name in GENERATED:
        block = section(text, name)
        fails = [l for l in block.splitlines() if l.startswith("- ")]
        shown = [l for l in block.splitlines() if "axiom instance" in l]
        assert fails and len(shown) >= len(fails) - 2
