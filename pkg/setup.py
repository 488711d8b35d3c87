import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="priorsense",
    version="0.1.0",
    description="Structured signal recovery with prior information and Gaussian-width measurement bounds",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=['test']),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.8',
    install_requires=['scipy>=1.6', 'numpy>=1.20', 'pandas>=1.2'],
    entry_points={'console_scripts': ['priorsense=priorsense.cli:main']},
)
