# Pair lists transcribed verbatim from the reference tables, including any typos.
TABLE_M3 = [(4, 7), (4, 13), (7, 16), (7, 19), (13, 16), (13, 49), (19, 67), (31, 43), (37, 73), (49, 193), (61, 97), (97, 241), (109, 443), (139, 331), (151, 163), (163, 211), (169, 313), (193, 769), (199, 787), (223, 811)]
TABLE_M4 = [(5, 13), (5, 37), (17, 25), (25, 97), (29, 61), (29, 229), (41, 169), (41, 241), (61, 349), (89, 289), (89, 601), (101, 109), (109, 181), (113, 625), (125, 157), (125, 1093), (149, 541), (169, 1321), (181, 829), (229, 2029)]
NEXUS_TABLE = {
    1: [(3, 4, 7), (3, 4, 13), (4, 5, 13), (4, 5, 37), (6, 7, 79), (6, 7, 103), (7, 8, 29), (7, 8, 43), (7, 8, 71), (7, 8, 127), (10, 11, 131)],
    2: [(3, 7, 16), (3, 7, 19), (5, 11, 41), (5, 11, 101), (6, 13, 37), (9, 19, 487)],
    3: [(5, 16, 31), (5, 16, 61), (5, 16, 121), (8, 25, 313), (10, 31, 311), (10, 31, 631)],
    4: [(3, 13, 16), (3, 13, 49), (4, 17, 25), (7, 29, 113), (7, 29, 449), (9, 37, 181), (9, 37, 1171), (10, 41, 401), (10, 41, 601), (10, 41, 1481)],
    5: [(6, 31, 127), (8, 41, 137)],
    6: [(3, 19, 67), (4, 25, 97), (5, 31, 181), (5, 31, 211), (5, 31, 256), (8, 49, 337), (10, 61, 701), (10, 61, 2221)],
    7: [(4, 29, 61), (4, 29, 229), (6, 43, 691), (9, 64, 199), (9, 64, 307), (9, 64, 343), (9, 64, 613), (9, 64, 631), (9, 64, 739), (9, 64, 829), (9, 64, 991), (9, 64, 1009), (9, 64, 1063), (9, 64, 1153), (9, 64, 2197)],
    8: [(5, 41, 71), (5, 41, 131), (6, 49, 73), (6, 49, 1201), (9, 73, 1621)],
    9: [(7, 64, 757), (7, 64, 883), (7, 64, 1583)],
    10: [(3, 31, 43), (4, 41, 169), (4, 41, 241), (6, 61, 349), (6, 61, 1237)],
    11: [(6, 67, 139)],
    12: [(3, 37, 73), (5, 61, 211), (5, 61, 256), (5, 61, 331), (5, 61, 421), (6, 73, 673), (9, 109, 739)],
    13: [(6, 79, 1879), (10, 131, 691), (10, 131, 1091)],
    14: [(5, 71, 281), (5, 71, 461), (9, 127, 397)],
    15: [(4, 61, 349), (10, 151, 431)],
    16: [(3, 49, 193), (6, 97, 1249)],
    17: [(6, 103, 2503), (8, 137, 953)],
    18: [(10, 181, 1061)],
    19: [(10, 191, 271), (10, 191, 751)],
    20: [(3, 61, 97), (5, 101, 311), (9, 181, 2161)],
}
