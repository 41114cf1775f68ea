"""Shared 20-row synthetic survey with hand-computed expected aggregates.

Covers DK exclusion, an unrecognized-outlet row, Independents, a
division-by-zero ratio (gamma), and a no-recognizing-Dems outlet (delta).
"""

HEADER = "respondent_id,party,outlet,recognized,trust,share,affect"

ROWS = [
    "r1,Dem,alpha,true,5,4,90",
    "r2,Dem,alpha,true,4,DK,70",
    "r3,Dem,alpha,true,2,2,50",
    "r4,Rep,alpha,true,2,1,10",
    "r5,Rep,alpha,true,4,5,60",
    "r6,Rep,alpha,false,5,5,99",
    "r7,Ind,alpha,true,5,5,80",
    "r8,Dem,beta,true,1,1,5",
    "r9,Dem,beta,true,DK,2,20",
    "r10,Dem,beta,true,4,DK,30",
    "r11,Rep,beta,true,5,5,95",
    "r12,Rep,beta,true,4,4,85",
    "r13,Rep,beta,true,DK,3,60",
    "r14,Ind,beta,true,1,1,50",
    "r15,Dem,gamma,true,2,1,40",
    "r16,Dem,gamma,true,3,2,45",
    "r17,Rep,gamma,true,5,5,90",
    "r18,Dem,delta,false,DK,DK,50",
    "r19,Rep,delta,true,4,4,75",
    "r20,Rep,delta,true,2,1,25",
]

# Hand-computed (spreadsheet-style) expectations, in expected output order
# (ascending Rep:Dem ratio, undefined last, ties by outlet name).
EXPECTED = [
    # outlet, n_dem, n_rep, trust_dem, trust_rep, share_dem, share_rep,
    # affect_dem, affect_rep, ratio
    ("alpha", 3, 2, (5 + 4 + 2) / 3, (2 + 4) / 2, (4 + 2) / 2, (1 + 5) / 2,
     (90 + 70 + 50) / 3, (10 + 60) / 2, (1 / 2) / (2 / 3)),
    ("beta", 3, 3, (1 + 4) / 2, (5 + 4) / 2, (1 + 2) / 2, (5 + 4 + 3) / 3,
     (5 + 20 + 30) / 3, (95 + 85 + 60) / 3, (2 / 2) / (1 / 2)),
    ("delta", 0, 2, None, (4 + 2) / 2, None, (4 + 1) / 2, None, (75 + 25) / 2, None),
    ("gamma", 2, 1, (2 + 3) / 2, 5.0, (1 + 2) / 2, 5.0, (40 + 45) / 2, 90.0, None),
]


def write_csv(path, rows=None):
    lines = [HEADER] + (ROWS if rows is None else rows)
    path.write_text("\n".join(lines) + "\n")
    return path
