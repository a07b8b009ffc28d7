"""Print the threshold tables: unsupervised frontier, SBM comparison, active frontier."""

from gbm_active import harness


def main():
    print("theta2  min theta1 (unsupervised)")
    for t2, v in harness.table1_rows():
        print(f"{t2:6d}  {v:8.3f}")
    print("\nb/2  min a/2 (SBM)")
    for h, v in harness.table2_rows():
        print(f"{h:3d}  {v:6.2f}")
    print("\ntheta2  active  unsupervised")
    for t2, a, u in harness.frontier_rows():
        print(f"{t2:6d}  {a:6.3f}  {u:8.3f}")


if __name__ == "__main__":
    main()
