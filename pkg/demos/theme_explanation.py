"""
Theme and explanation parts
===========================

Compose a theme part from a table title, split summaries back apart and
see which structural checks fail.
"""

from tabtx.tx import compose_summary, compose_theme_part, parse_tx_summary, validate_tx

print(compose_theme_part("the refugee status by nationality").rendered)
print(compose_theme_part("국적별 난민 현황", "ko").rendered)

title = "refugee status by nationality"
candidates = [
    compose_summary("the " + title, "only 147 of 2,437 applications were approved."),
    "Only 147 of 2,437 applications were approved.",
    "According to the asylum statistics, only 147 were approved.",
    compose_summary(title, "147 were approved. The rate is low."),
]
for text in candidates:
    parsed = parse_tx_summary(text, title)
    report = validate_tx(parsed, title)
    print()
    print(text)
    print("  theme:", repr(parsed.theme.rendered))
    print("  valid:", report.valid, report.failed() or "")

korean = "국적별 난민 현황에 따르면 전체 신청 2,437건 중 147건만 인정되었다."
parsed = parse_tx_summary(korean, "국적별 난민 현황", "ko")
print()
print(korean)
print("  theme:", repr(parsed.theme.rendered), "valid:", validate_tx(parsed, "국적별 난민 현황", "ko").valid)
